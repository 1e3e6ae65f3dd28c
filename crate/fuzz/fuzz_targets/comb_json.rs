#![no_main]

use guinand::atoms::{pair, AtomComb};
use guinand::schwartz::GaussPoly;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(comb) = AtomComb::from_json(text) else { return };
    // Accepted combs are sorted, merged and round-trip.
    for w in comb.atoms().windows(2) {
        assert!((w[0].location, w[0].order) < (w[1].location, w[1].order));
    }
    let back = AtomComb::from_json(&comb.to_json()).expect("serialized comb decodes");
    assert_eq!(back.atoms(), comb.atoms());
    let g = <GaussPoly>::gaussian(1.0).unwrap();
    let _ = pair(&comb, &g);
});
