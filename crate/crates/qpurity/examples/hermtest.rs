use qpurity::*;
use std::time::Instant;
fn main() {
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    let mut fails = 0;
    for &alpha in &[0.3, 1.0, 2.0] {
        let order = RenyiOrder::new(alpha).unwrap();
        for &l0 in &[0.1, 0.375, 0.5] {
            for &tau in &[0.5, 1.0, 2.0] {
                let cfg = SimulationConfig {
                    l0: Impurity::new(l0).unwrap(),
                    t0: 0.0, t_final: tau, dt: 1e-3,
                    paths: 100_000, seed: 2026, store_paths: false,
                };
                let ens = simulate_wr_diagonal(&cfg).unwrap();
                let est = expected_terminal_cost(&ens, order);
                let quad = wr_expected_entropy(order, cfg.l0, tau).unwrap();
                let z = (est.mean - quad) / est.std_error;
                if z.abs() >= 3.0 { fails += 1; }
                if z.abs() > worst.abs() { worst = z; }
                println!("a={alpha} L0={l0} tau={tau}: mc={:.6} quad={:.6} z={z:+.2}", est.mean, quad);
            }
        }
    }
    println!("worst |z| = {:.2}, cells over 3se: {fails}/27, elapsed {:?}", worst, t0.elapsed());
}
