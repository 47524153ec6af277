/// Splits `text` into maximal runs of Unicode letters/digits, lowercased.
///
/// Everything else (whitespace, punctuation, symbols, dashes) separates tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|s| !s.is_empty())
        .map(str::to_lowercase)
        .collect()
}
