#![no_main]

use std::path::Path;

use libfuzzer_sys::fuzz_target;

use roundness::io::{simplex_from_file, Universe, UniverseSpec};
use roundness::lp::gamma_p_lp;
use roundness::simplex::gamma_p;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = roundness::io::parse_simplex_json(text) else {
        return;
    };
    // never follow filesystem references from fuzz input
    if matches!(file.universe, UniverseSpec::Path(_)) {
        return;
    }
    let Ok(loaded) = simplex_from_file(file, Path::new("."), 1e-9, 1e-9, 1e-9) else {
        return;
    };
    if loaded.universe.len() > 16 || loaded.simplex.s() + loaded.simplex.t() > 32 {
        return;
    }
    let _ = loaded.simplex.repeating_numbers();
    let _ = loaded.simplex.is_degenerate(1e-9);
    let refined = loaded.simplex.complete_refine(1e-9);
    if let roundness::simplex::Refined::CompletelyRefined(r) = &refined {
        let _ = roundness::simplex::to_alpha(r);
    }
    match &loaded.universe {
        Universe::Metric(space) => {
            for p in [0.5, 1.0, 2.0] {
                let _ = gamma_p(&loaded.simplex, space, p);
            }
        }
        Universe::Points(ps) => {
            let _ = gamma_p_lp(&loaded.simplex, ps);
        }
    }
});
