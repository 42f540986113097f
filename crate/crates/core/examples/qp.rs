//! The restricted quadratic program on a hand-written constraint family:
//! two loops sharing an edge.
//!
//! `cargo run --example qp`

use loopmod::qp::{solve, ConstraintMatrix, QpOptions};

fn main() {
    // edges 0..=2 form a triangle, edges 2..=5 a square sharing edge 2
    let mut family = ConstraintMatrix::new(6, [vec![0, 1, 2]]);
    let first = solve(&family, None, &QpOptions::default());
    println!("triangle only: modulus {:.6}, rho {:.4?}", first.modulus, first.rho);

    family.push(vec![2, 3, 4, 5]);
    let opts = QpOptions {
        record_dual: true,
        ..QpOptions::default()
    };
    let both = solve(&family, Some(&first.lambda), &opts);
    println!("both loops:    modulus {:.6}, rho {:.4?}", both.modulus, both.rho);
    println!(
        "lambda {:.4?}, {} passes, gap {:.1e}, dual trace {:.4?}",
        both.lambda,
        both.iterations,
        both.duality_gap,
        &both.dual_trace[..both.dual_trace.len().min(6)]
    );
}
