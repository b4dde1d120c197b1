#![no_main]

use anlattice::generate::{random_unimodular, ScrambleRecipe};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(recipe) = text.parse::<ScrambleRecipe>() {
        let shown = recipe.to_string();
        assert_eq!(shown.parse::<ScrambleRecipe>().unwrap(), recipe);
        if recipe.steps <= 64 {
            let u = random_unimodular(3, recipe).expect("small recipes stay in range");
            assert_eq!(u.det().abs(), 1);
        }
    }
});
