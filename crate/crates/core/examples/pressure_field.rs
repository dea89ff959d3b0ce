//! Pressures and velocities of both fluids around a growing Cassini oval.
use muskat::fields::Field;
use muskat::{Mobility, Shape, C64};

fn main() -> muskat::Result<()> {
    let shape = Shape::cassini(2.0, 1.0)?;
    let field = Field::new(shape, 0.5, Mobility::new(0.5, 2.0)?);
    for z in [C64::new(0.0, 0.5), C64::new(1.5, 0.2), C64::new(3.0, 0.0), C64::new(1.0, 5.0)] {
        let s = field.sample(z)?;
        println!(
            "z = {z:<12} fluid {}  p = {:+.10}  v = ({:+.6}, {:+.6})",
            s.fluid, s.pressure, s.velocity.0, s.velocity.1
        );
    }
    // on the interface both pressures vanish
    let (z, _) = shape.boundary_param(0.7);
    println!("on the interface: p1 = {:.2e}, p2 = {:.2e}", field.pressure(1, z)?, field.pressure(2, z)?);
    println!("normal velocity there: {:.10}", field.normal_velocity(z)?);
    Ok(())
}
