//! Prints the raw quantities behind the frozen constants in `constants.rs`.
//!
//! `cargo run --release -p magbag-core --example calibrate`

use magbag_core::analysis::{flux_charge, sphere_stats, theorem_report, SphereQuadrature};
use magbag_core::bag::{coulomb_sums, make_shell_config, place_points};
use magbag_core::glued::{residual_report, AnnulusQuadrature};
use magbag_core::Point;

fn main() {
    println!("# shell lemma sums at R = N");
    for n in [64usize, 128, 256, 512] {
        let pts: Vec<Point> = place_points(n, n as f64).unwrap().points.iter().map(|p| p.position).collect();
        let (nf, r) = (n as f64, n as f64);
        let (mut k1, mut k2) = (0f64, 0f64);
        for p in &pts {
            let c = coulomb_sums(&pts, p, 1.0);
            k1 = k1.max((c.s1 - nf / r).abs() * r / (nf.sqrt() * nf.ln()));
            k2 = k2.max(c.s2 * r * r / (nf * nf.ln()));
        }
        println!("N={n} kappa1={k1:.4} kappa2={k2:.4}");
    }

    println!("# flux");
    let q = SphereQuadrature::fibonacci(16384);
    for n in [25usize, 100] {
        let cfg = make_shell_config(n, 16.0).unwrap();
        for f in [1.5, 2.0, 4.0] {
            println!("N={n} r={f}R flux={:.9}", flux_charge(f * cfg.radius, &cfg, &q).unwrap());
        }
    }

    println!("# residual scaling, m = 16");
    for n in [64usize, 100, 128, 256] {
        let cfg = make_shell_config(n, 16.0).unwrap();
        let rep = residual_report(&cfg, &AnnulusQuadrature::DEFAULT);
        let nf = n as f64;
        println!(
            "N={n} max_gL={:.4e} scaled={:.4} max_gT={:.4e} gstar={:?} gstar*m*lnN={:.4e} zeros={}",
            rep.max_g_l,
            rep.max_g_l * nf / nf.ln(),
            rep.max_g_t,
            rep.gstar,
            rep.gstar.total * 16.0 * nf.ln(),
            rep.annuli_with_zero
        );
        if n == 64 || n == 256 {
            let d = residual_report(&cfg, &AnnulusQuadrature::DEFAULT.doubled());
            println!(
                "   doubled gstar={:?} rel change={:.3e}",
                d.gstar,
                (d.gstar.total - rep.gstar.total).abs() / d.gstar.total
            );
        }
    }

    println!("# g_T against r̄L, N = 100");
    for m in [16.0, 81.0, 256.0] {
        let cfg = make_shell_config(100, m).unwrap();
        let rep = residual_report(&cfg, &AnnulusQuadrature::DEFAULT);
        let rl = cfg.diagnostics.min_residue * cfg.glue_length;
        println!("m={m} rbarL={rl:.5} max_gT={:.5e} ln={:.5}", rep.max_g_t, rep.max_g_t.ln());
    }

    println!("# bag geometry, N = 100, m = 16");
    let cfg = make_shell_config(100, 16.0).unwrap();
    let q = SphereQuadrature::fibonacci(2048);
    let mu = cfg.diagnostics.mu;
    for f in [0.0, 0.25, 0.5, 0.9, 1.0, 1.1, 2.0] {
        let r = f * cfg.radius;
        if r == 0.0 {
            continue;
        }
        let s = sphere_stats(r, &cfg, &q).unwrap();
        println!("r={f}R min={:.5} mean={:.5} max={:.5} mean/mu={:.5}", s.min, s.mean, s.max, s.mean / mu);
    }
    for row in theorem_report(&cfg, &[0.3, 0.5, 0.7], &q).unwrap() {
        println!("{row:?}");
    }
}
