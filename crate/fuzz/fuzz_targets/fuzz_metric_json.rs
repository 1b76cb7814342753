#![no_main]

use libfuzzer_sys::fuzz_target;

use roundness::negtype::{generalized_roundness, has_strict_negative_type};
use roundness::Tolerances;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = roundness::io::parse_metric_json(text) else {
        return;
    };
    let Ok(space) = file.into_space(1e-9) else {
        return;
    };
    // keep the eigenvalue work bounded; parser and validator robustness is
    // what is under test
    if space.len() > 16 {
        return;
    }
    let tol = Tolerances::default();
    let _ = has_strict_negative_type(&space, 1.0, &tol);
    let _ = generalized_roundness(&space, 4.0, 1e-3, &tol);
    if let Ok(transformed) = space.metric_transform(1.0) {
        let _ = has_strict_negative_type(&transformed, 2.0, &tol);
    }
});
