//! Schwarz function of each family on its own interface.
use muskat::{Shape, C64};

fn main() -> muskat::Result<()> {
    let shapes = [
        Shape::circle(1.0)?,
        Shape::ellipse(2.0, 1.0)?,
        Shape::neumann(2.5, 5f64.sqrt() / 2.0)?,
        Shape::cassini(2.0, 1.0)?,
    ];
    for shape in shapes {
        let worst = shape
            .boundary_points(1000)?
            .into_iter()
            .map(|z| (shape.schwarz(z).unwrap() - z.conj()).norm())
            .fold(0.0, f64::max);
        println!(
            "{:<8} area {:.12}  max |S(z) - conj z| on the interface {worst:.2e}",
            shape.family().name(),
            shape.area()
        );
    }
    // off the curve S is analytic but no longer the reflection
    let ellipse = Shape::ellipse(2.0, 1.0)?;
    let z = C64::new(3.0, 1.0);
    println!("ellipse: S({z}) = {:.6}", ellipse.schwarz(z)?);
    Ok(())
}
