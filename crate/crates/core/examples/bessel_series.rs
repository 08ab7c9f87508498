//! Bessel functions from their power series, and three routes to J_{n+α} J_{m+α}.

use herglotz::specfun::*;

fn main() {
    let budget = SeriesBudget::generous();

    println!("{:>6} {:>22} {:>22}", "r", "J_1/2(r)", "sqrt(2/(πr)) sin r");
    for r in [0.5, 1.0, 5.0, 10.0] {
        let j = bessel_j(BesselOrder::new(0.5).unwrap(), r, budget).unwrap();
        let closed = (2.0 / (std::f64::consts::PI * r)).sqrt() * r.sin();
        println!("{r:>6} {j:>22.16} {closed:>22.16}");
    }

    // J_{−n} = (−1)^n J_n
    let r = 3.7;
    let j3 = bessel_j(BesselOrder::integer(3), r, budget).unwrap();
    let jm3 = bessel_j(BesselOrder::integer(-3), r, budget).unwrap();
    println!("\nJ_3({r}) = {j3:.16}, J_-3({r}) = {jm3:.16}");

    println!("\nJ_(2+α) J_(5+α) at r = 6.3");
    for alpha in [0.0, 0.5, 1.0] {
        let a = bessel_j(BesselOrder::new(2.0 + alpha).unwrap(), 6.3, budget).unwrap();
        let b = bessel_j(BesselOrder::new(5.0 + alpha).unwrap(), 6.3, budget).unwrap();
        let series = bessel_product_series(2, 5, alpha, 6.3, budget).unwrap();
        let integral = bessel_product_integral(2, 5, alpha, 6.3, 256).unwrap();
        println!("  α = {alpha}: direct {:.15e}  series {series:.15e}  integral {integral:.15e}", a * b);
    }

    let c = bessel_product_coefficients(1, 1, 0.0, 5).unwrap();
    println!("\nJ_1(r)² = Σ c_k (r/2)^(2+2k), c = {c:?}");

    let nu = BesselOrder::integer(4);
    for r in [1.0, 4.0, 20.0] {
        println!("|J_4({r})| = {:.3e} ≤ {:.3e}", bessel_j(nu, r, budget).unwrap().abs(), bessel_bound(nu, r));
    }
}
