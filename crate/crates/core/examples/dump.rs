use bcsgap::*;
fn main() {
    let params = ModelParams {
        hbar_omega_d: 1.0, u1: 0.3, u2: 0.3002,
        potential: PotentialSpec::Separable { amplitude: 1.0 },
    };
    let t0 = std::time::Instant::now();
    let p = GapProblem::new(params, SolverConfig::default()).unwrap();
    let c = p.constants();
    println!("build time: {:?}", t0.elapsed());
    println!("z0          = {:.15}", c.z0);
    println!("tau0        = {:.15}", c.tau0);
    println!("tau1        = {:.15}", c.tau1);
    println!("tau2        = {:.15}", c.tau2);
    println!("delta1_zero = {:.15}", c.delta1_zero);
    println!("delta2_zero = {:.15}", c.delta2_zero);
    println!("tau         = {:.15}", c.tau);
    println!("a           = {:.15}", c.a);
    println!("b           = {:.15}", c.b);
    println!("gamma       = {:.15}", c.gamma);
    println!("U2*a        = {:.15}", 0.3002 * c.a);
    println!("margin      = {:.6e}", 1.0 - 0.3002 * c.a);
    println!("max U2      = {:.15}", 1.0 / c.a);
    println!("tau0/tau1   = {:.6}", c.tau0 / c.tau1);
    let t1 = std::time::Instant::now();
    let s = p.solve_surface().unwrap();
    println!("surface time: {:?}  max_enclosure = {:.3e}", t1.elapsed(), s.max_enclosure());
    let iters: Vec<_> = s.slices.iter().map(|sl| sl.iterations).take(4).collect();
    println!("first iteration counts: {:?}", iters);
    // weak coupling ratio
    let pw = bcsgap::constant_gap::CouplingProblem::new(1.0, 0.15).unwrap();
    let tau_w = bcsgap::constant_gap::solve_tau_c(&pw, 1e-12, 1e-12).unwrap();
    let d0_w = bcsgap::constant_gap::delta_at_zero(&pw);
    println!("U=0.15: delta0/tau_c = {:.6}", d0_w / tau_w);
}
