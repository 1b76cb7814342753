#![no_main]

use libfuzzer_sys::fuzz_target;

use roundness::lp::elsner_identity_check;
use roundness::Tolerances;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = roundness::io::parse_families_json(text) else {
        return;
    };
    if file.xs.len() > 8 || file.xs.iter().chain(&file.ys).any(|v| v.len() > 8) {
        return;
    }
    let tol = Tolerances::default();
    for p in [0.5, 1.0, 2.0] {
        let _ = elsner_identity_check(&file.xs, &file.ys, p, &tol);
    }
});
