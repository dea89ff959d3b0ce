//! Mother bodies and their fluxes: Neumann's oval under extraction.
use muskat::motherbody::{build_mother_body, density_at, flux, flux_balance, area_rate};
use muskat::{Mobility, Shape};

fn main() -> muskat::Result<()> {
    let shape = Shape::neumann(2.5, 5f64.sqrt() / 2.0)?;
    let rates = shape.admissible_rates(-0.2);
    let mb = build_mother_body(&shape, rates, Mobility::new(1.0, 2.0)?)?;

    println!("area rate {:.12}", area_rate(&shape, rates));
    for part in &mb.parts {
        println!(
            "{:>8} fluid {}  signed flux {:+.12}  |quadrature| {:.12}",
            part.support.kind(),
            part.fluid,
            part.signed_flux,
            flux(part)?
        );
        if part.support.kind() == "ray" {
            for s in [0.1, 0.5, 2.0] {
                println!("           density at s={s}: {:.6}", density_at(part, s)?);
            }
        }
    }
    println!("balance residual {:.2e}", flux_balance(&mb, &shape, rates));
    Ok(())
}
