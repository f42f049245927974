//! Shared inputs for the criterion benchmarks in `benches/`.

use cartan_core::verifier::bundled_test_functions;
use cartan_core::{build_instance, make_dual_point, DualPoint, IrrepLabel, RawDualPoint, SymmetricPairDescriptor, TestFunction};

/// Instance, its first bundled test function and a non-zero dual point.
pub struct Fixture {
    pub pair: SymmetricPairDescriptor,
    pub function: TestFunction,
    pub point: DualPoint,
}

pub fn fixture(instance: &str) -> Fixture {
    let pair = build_instance(instance).expect("shipped instance");
    let function = bundled_test_functions(&pair).expect("bundled functions").remove(0);
    let (h, label) = match instance {
        "M2" => (vec![1.3], IrrepLabel::Trivial),
        "M3" => (vec![1.3], IrrepLabel::Charge(1)),
        _ => (vec![1.3, 0.0], IrrepLabel::Tuple(vec![IrrepLabel::Trivial, IrrepLabel::Charge(1)])),
    };
    let point = make_dual_point(&pair, &RawDualPoint { h, label }).expect("valid point");
    Fixture { pair, function, point }
}

/// `H_j = H + 2^{−j}` for `j < n` with a fixed label, and its limit.
pub fn geometric_sequence(f: &Fixture, n: usize) -> Vec<DualPoint> {
    (0..n)
        .map(|j| {
            let mut h = f.point.h.clone();
            h[0] += 0.5f64.powi(j as i32);
            make_dual_point(&f.pair, &RawDualPoint { h, label: f.point.label.clone() }).expect("valid point")
        })
        .collect()
}
