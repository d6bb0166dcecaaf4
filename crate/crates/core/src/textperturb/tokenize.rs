/// Characters detached from the edges of a whitespace-delimited chunk.
fn is_edge_punct(c: char) -> bool {
    !c.is_alphanumeric()
}

pub(super) fn tokenize_with_spacing(text: &str) -> (Vec<String>, Vec<bool>) {
    let mut tokens = Vec::new();
    let mut joined = Vec::new();
    for chunk in text.split_whitespace() {
        let chars: Vec<char> = chunk.chars().collect();
        let start = chars.iter().position(|&c| !is_edge_punct(c));
        let mut first = true;
        let mut push = |tok: String, tokens: &mut Vec<String>, joined: &mut Vec<bool>| {
            tokens.push(tok);
            joined.push(!first);
            first = false;
        };
        match start {
            None => {
                for c in chars {
                    push(c.to_string(), &mut tokens, &mut joined);
                }
            }
            Some(start) => {
                let end = chars.iter().rposition(|&c| !is_edge_punct(c)).unwrap() + 1;
                for &c in &chars[..start] {
                    push(c.to_string(), &mut tokens, &mut joined);
                }
                push(chars[start..end].iter().collect(), &mut tokens, &mut joined);
                for &c in &chars[end..] {
                    push(c.to_string(), &mut tokens, &mut joined);
                }
            }
        }
    }
    (tokens, joined)
}

/// Splits on whitespace, then detaches leading and trailing punctuation
/// characters as separate tokens. Internal punctuation (apostrophes,
/// hyphens, periods) stays inside the word.
pub fn tokenize(text: &str) -> Vec<String> {
    tokenize_with_spacing(text).0
}

pub(super) fn render(tokens: &[String], joined: &[bool]) -> String {
    let mut out = String::new();
    for (i, (tok, &glue)) in tokens.iter().zip(joined).enumerate() {
        if i > 0 && !glue {
            out.push(' ');
        }
        out.push_str(tok);
    }
    out
}

/// Joins a bare token list, attaching closing punctuation to the preceding
/// token and opening brackets to the following one.
pub fn detokenize(tokens: &[String]) -> String {
    let mut out = String::new();
    let mut attach_next = true;
    for tok in tokens {
        let closing = matches!(tok.as_str(), "," | "." | ";" | ":" | "!" | "?" | ")" | "]" | "}" | "%");
        if !attach_next && !closing {
            out.push(' ');
        }
        out.push_str(tok);
        attach_next = matches!(tok.as_str(), "(" | "[" | "{");
    }
    out
}

/// Collapses whitespace runs to single spaces and trims the ends.
pub fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}
