#![no_main]

use bdindex::index::{deserialize, serialize};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok((idx, ids)) = deserialize(data) {
        let again = serialize(&idx, ids.as_ref());
        let (back, _) = deserialize(&again).expect("re-encoded index decodes");
        assert_eq!(serialize(&back, ids.as_ref()), again);
    }
});
