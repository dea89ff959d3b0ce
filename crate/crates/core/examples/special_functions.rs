//! Elliptic integrals and the hypergeometric factor of the Cassini area.
use muskat::specfun::{agm, ellip_f, ellip_k, hyp2f1_half_agm, hyp2f1_half_series, EllipticModulus};
use muskat::C64;

fn main() -> muskat::Result<()> {
    let k = EllipticModulus::new(0.8)?;
    println!("K(0.8) = {:.15}", ellip_k(k));
    println!("pi / (2 agm(1, k')) = {:.15}", std::f64::consts::FRAC_PI_2 / agm(1.0, k.complementary()));
    println!("F(pi/2 | 0.8) via Carlson = {:.15}", ellip_f(C64::new(std::f64::consts::FRAC_PI_2, 0.0), 0.8)?.re);

    for (a, b) in [(2.0_f64, 1.0_f64), (1.1, 1.0)] {
        let x = (b / a).powi(4);
        println!(
            "cassini a={a} b={b}: 2F1 series {:.15} agm {:.15}",
            hyp2f1_half_series(x),
            hyp2f1_half_agm(x)
        );
    }
    Ok(())
}
