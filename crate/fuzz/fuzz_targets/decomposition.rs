#![no_main]

use gpt_sim::io;
use gpt_sim::numerics::Rational;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(v) = io::parse_json(text) else { return };
    let _ = io::decomposition_from_json::<Rational>(&v);
    let _ = io::decomposition_from_json::<f64>(&v);
});
