mod common;

use proptest::prelude::*;

use common::Gen;
use deduct_core::notation::{parse, print, Notation};
use deduct_core::syntax::Language;

const ALL: [Notation; 4] = [
    Notation::ASCII,
    Notation::UNICODE,
    Notation::ASCII_STRICT,
    Notation::UNICODE_STRICT,
];

fn roundtrip(seed: u64, fol: bool) -> Result<(), TestCaseError> {
    let lang = if fol { Language::fol() } else { Language::prop() };
    let t = Gen::new(seed, fol).formula(8);
    for n in ALL {
        let text = print(&t, n);
        let back = parse(&lang, n, &text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(&back, &t, "{}", text);
        prop_assert_eq!(print(&back, n), text);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn propositional_roundtrip(seed in any::<u64>()) {
        roundtrip(seed, false)?;
    }

    #[test]
    fn first_order_roundtrip(seed in any::<u64>()) {
        roundtrip(seed, true)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn glyph_sets_mix(seed in any::<u64>()) {
        let t = Gen::new(seed, true).formula(6);
        let unicode = print(&t, Notation::UNICODE);
        prop_assert_eq!(parse(&Language::fol(), Notation::ASCII, &unicode).unwrap(), t.clone());
        let ascii = print(&t, Notation::ASCII);
        prop_assert_eq!(parse(&Language::fol(), Notation::UNICODE, &ascii).unwrap(), t);
    }
}
