use plancherel_core::equilibrium::*;

fn main() {
    let eta: f64 = 5f64.ln();
    let p = profile(eta, 0.6).unwrap();
    println!("x=0.6: ell={} g_inf={} 2g_inf={}", p.ell, p.g_inf, 2.0 * p.g_inf);
    let p1 = profile(eta, -1.5).unwrap();
    println!("x=-1.5: ell={} g_inf={} ell-2g_inf={} -eta*x={}", p1.ell, p1.g_inf, p1.ell - 2.0*p1.g_inf, -eta*(-1.5));
}
