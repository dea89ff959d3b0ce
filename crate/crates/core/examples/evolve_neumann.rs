//! Extraction from a Neumann oval until it pinches off.
use muskat::evolution::evolve;
use muskat::{FluxSchedule, Mobility, Shape};

fn main() -> muskat::Result<()> {
    let shape = Shape::neumann(2.5, 5f64.sqrt() / 2.0)?;
    let schedule = FluxSchedule::Constant { q: -std::f64::consts::PI };
    let traj = evolve(shape, &schedule, 3.0, 1e-3, Mobility::default())?;
    for s in traj.samples.iter().step_by(250) {
        println!("t = {:.3}  a = {:.6}  b = {:.6}  area = {:.6}", s.t, s.params.a, s.params.b, s.area);
    }
    println!("terminal: {} at t = {:.9}", traj.terminal.kind.name(), traj.terminal.t);
    Ok(())
}
