#![no_main]

use bdindex::io::parse_update_stream;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = parse_update_stream(data);
});
