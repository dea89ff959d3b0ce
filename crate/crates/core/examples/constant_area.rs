//! Ellipse deformed at constant area in a linear far-field flow.
use muskat::fields::{Field, Variant};
use muskat::motherbody::{constant_area_density, constant_area_net_flux};
use muskat::{Mobility, Shape, C64};

fn main() -> muskat::Result<()> {
    let shape = Shape::ellipse(2.0, 1.0)?;
    let mob = Mobility::default();
    let field = Field::with_variant(shape, 0.3, mob, Variant::ConstantArea)?;
    println!("rates: a_dot = {:.6}, b_dot = {:.6}", field.rates.a_dot, field.rates.b_dot);
    let d = shape.focal_half_distance();
    for x in [-0.9 * d, -0.5 * d, 0.0, 0.5 * d] {
        println!("density at x = {x:+.4}: {:+.6}", constant_area_density(&shape, 0.3, mob, x)?);
    }
    println!("net interior flux {:.2e}", constant_area_net_flux(&shape, 0.3, mob)?);
    println!("p1 at 10 + 3i: {:.6}", field.pressure(1, C64::new(10.0, 3.0))?);
    Ok(())
}
