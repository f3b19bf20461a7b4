use proptest::prelude::*;

use hyperring_lab::format::{emit, parse_definition};
use hyperring_lab::registry::{builtin, builtin_ids};

/// Splits every table line of a definition into one line per entry.
fn one_entry_per_line(text: &str) -> (Vec<String>, Vec<String>) {
    let mut header = Vec::new();
    let mut entries = Vec::new();
    for line in text.lines() {
        match line.split_once(": ") {
            Some((key @ ("mul" | "add"), rest)) => {
                entries.extend(rest.split_whitespace().map(|e| format!("{key}: {e}")));
            }
            _ => header.push(line.to_string()),
        }
    }
    (header, entries)
}

fn definition_and_shuffled_entries() -> impl Strategy<Value = (String, String)> {
    let ids = builtin_ids();
    (0..ids.len()).prop_flat_map(move |k| {
        let text = emit(&builtin(&ids[k]).unwrap().unwrap().ring);
        let (header, entries) = one_entry_per_line(&text);
        let header = header.join("\n");
        (Just(text), Just(entries).prop_shuffle())
            .prop_map(move |(text, entries)| (text, format!("{header}\n{}\n", entries.join("\n"))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn emit_then_parse_is_identity((text, shuffled) in definition_and_shuffled_entries()) {
        let a = parse_definition(&text).unwrap();
        prop_assert_eq!(emit(&a), text);
        // Entry order does not matter.
        let again = parse_definition(&shuffled).unwrap();
        prop_assert!(again.same_tables(&a));
    }
}
