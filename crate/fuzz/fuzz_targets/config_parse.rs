//! The config parser must never panic: any byte sequence either yields a
//! patch or a structured error.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = interbank::config::parse_config(text);
    }
});
