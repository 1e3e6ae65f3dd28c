#![no_main]

use guinand::schwartz::parse;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(parsed) = parse(text) else { return };
    let f = parsed.value;
    // Printing must produce something the parser accepts again.
    let printed = f.to_string();
    let again = parse(&printed).expect("printed expression reparses");
    assert_eq!(again.value.terms().len(), f.terms().len());
    let _ = f.fourier();
    let _ = f.derivative(2).eval(0.5);
});
