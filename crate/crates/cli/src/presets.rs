//! Named configuration fragments for the three code families.

const PRESETS: &[(&str, &str)] = &[
    ("625-plain", include_str!("../presets/625-plain.toml")),
    ("625-sa", include_str!("../presets/625-sa.toml")),
    ("625-ps-hard", include_str!("../presets/625-ps-hard.toml")),
    ("625-ps-easy", include_str!("../presets/625-ps-easy.toml")),
    ("1600-plain", include_str!("../presets/1600-plain.toml")),
    ("1600-sa", include_str!("../presets/1600-sa.toml")),
    ("1600-ps-hard", include_str!("../presets/1600-ps-hard.toml")),
    ("1600-ps-easy", include_str!("../presets/1600-ps-easy.toml")),
    ("2025-plain", include_str!("../presets/2025-plain.toml")),
    ("2025-sa", include_str!("../presets/2025-sa.toml")),
    ("2025-ps-hard", include_str!("../presets/2025-ps-hard.toml")),
    ("2025-ps-easy", include_str!("../presets/2025-ps-easy.toml")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(name, _)| *name)
}

pub fn get(name: &str) -> Option<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}
