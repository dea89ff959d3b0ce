//! Writes the Neumann and Cassini figures as SVG into the current directory.
use muskat::cli::{shape_svg, Resolved, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let figures = [
        ("fig1a_neumann.svg", "neumann", 2.5, 5f64.sqrt() / 2.0),
        ("fig2_cassini_a1.1.svg", "cassini", 1.1, 1.0),
        ("fig2_cassini_a2.svg", "cassini", 2.0, 1.0),
    ];
    for (name, family, a, b) in figures {
        let config = RunConfig { family: Some(family.into()), a0: Some(a), b0: Some(b), ..RunConfig::default() };
        std::fs::write(name, shape_svg(&Resolved::from_config(&config)?)?)?;
        println!("wrote {name}");
    }
    Ok(())
}
