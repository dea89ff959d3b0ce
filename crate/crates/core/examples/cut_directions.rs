//! Cut directions at the moving singularities, against a brute-force scan
//! of the pressure variation around each branch point.
use muskat::fields::Field;
use muskat::motherbody::{cut_direction_moving, moving_singularities};
use muskat::verify::angular_scan;
use muskat::{Mobility, Shape};

fn main() -> muskat::Result<()> {
    for shape in [Shape::ellipse(2.0, 1.0)?, Shape::neumann(2.5, 5f64.sqrt() / 2.0)?, Shape::cassini(2.0, 1.0)?] {
        let field = Field::new(shape, 0.3, Mobility::default());
        for m in moving_singularities(&shape, field.rates) {
            let predicted = cut_direction_moving(m.phi, m.z_dot)?;
            let scanned = angular_scan(&field, m.fluid, m.z, 1e-3 * shape.scale(), 128);
            println!(
                "{:<8} z_a = {:.4}  predicted {predicted:+.6}  scanned {scanned:+.6}",
                shape.family().name(),
                m.z
            );
        }
    }
    Ok(())
}
