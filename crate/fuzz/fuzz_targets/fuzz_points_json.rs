#![no_main]

use libfuzzer_sys::fuzz_target;

use roundness::hilbert::affine_dependence;
use roundness::lp::{lp_distance_matrix, vd_kernel};
use roundness::Tolerances;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = roundness::io::parse_points_json(text) else {
        return;
    };
    let Ok(ps) = file.into_point_set(1e-9) else {
        return;
    };
    if ps.len() > 12 || ps.dim() > 8 {
        return;
    }
    let tol = Tolerances::default();
    let kernel = vd_kernel(&ps, &tol);
    for alpha in &kernel.basis {
        // kernel vectors must stay consumable downstream
        let ids: Vec<usize> = (0..ps.len()).collect();
        let _ = roundness::simplex::from_alpha(&ids, alpha, 1e-6);
    }
    let _ = lp_distance_matrix(&ps);
    let _ = affine_dependence(&ps);
});
