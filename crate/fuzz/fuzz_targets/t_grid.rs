#![no_main]

use guinand::radial::{parse_t_grid, MAX_GRID_POINTS};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(ts) = parse_t_grid(text) {
        assert!(!ts.is_empty() && ts.len() <= MAX_GRID_POINTS);
        assert!(ts.windows(2).all(|w| w[0] < w[1]));
    }
});
