//! Full verification suite for every family.
use muskat::fields::Field;
use muskat::verify::{run_suite, SuiteConfig};
use muskat::{Mobility, Shape};

fn main() -> muskat::Result<()> {
    let shapes = [
        Shape::circle(1.0)?,
        Shape::ellipse(2.0, 1.0)?,
        Shape::neumann(2.5, 5f64.sqrt() / 2.0)?,
        Shape::cassini(1.1, 1.0)?,
    ];
    for shape in shapes {
        let field = Field::new(shape, -0.4, Mobility::new(1.0, 10.0)?);
        let report = run_suite(&field, &SuiteConfig::default())?;
        println!("{} passed: {}", report.family, report.passed);
        for c in &report.checks {
            println!("  {:<22} {:>12.3e}  (tol {:.1e}) {}", c.name, c.residual, c.tolerance, if c.passed { "ok" } else { "FAIL" });
        }
    }
    Ok(())
}
