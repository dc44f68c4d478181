use crate::error::{Error, Result};

pub(crate) fn check_symbol(sym: &str) -> Result<()> {
    let ok = !sym.is_empty()
        && sym != "1"
        && !sym.chars().any(|c| c.is_whitespace() || matches!(c, '^' | '*' | '"' | '[' | ']'))
        && !sym.chars().all(|c| c.is_ascii_digit() || c == '-');
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!("`{sym}` is not a usable generator symbol")))
    }
}

/// Splits an element string such as `"g h^-1 g^2"` into `(symbol, exponent)`
/// pairs. Tokens are separated by whitespace or `*`; `"1"` is the empty word.
pub fn parse_word(text: &str) -> Result<Vec<(String, i64)>> {
    let malformed = |reason: &str| Error::MalformedWord { word: text.to_string(), reason: reason.to_string() };
    let mut out = Vec::new();
    let mut any = false;
    for token in text.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
        any = true;
        let (sym, exp) = match token.split_once('^') {
            Some((s, e)) => {
                let e = e.trim_start_matches('(').trim_end_matches(')');
                let e: i64 = e.parse().map_err(|_| malformed("exponent is not an integer"))?;
                (s, e)
            }
            None => (token, 1),
        };
        if sym.is_empty() {
            return Err(malformed("missing symbol before `^`"));
        }
        if sym == "1" {
            continue;
        }
        out.push((sym.to_string(), exp));
    }
    if !any {
        return Err(malformed("empty element string (use \"1\" for the identity)"));
    }
    Ok(out)
}
