use omegares::LassoWord;

use super::ParseError;

fn err(column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line: 1, column, message: message.into() }
}

/// Parses `<prefix>$<period>`, or `<prefix>|<period>` when `$` is a letter.
/// Letters are whitespace-separated tokens if the text contains whitespace
/// and single characters otherwise.
pub fn parse_lasso(text: &str, alphabet: &[String]) -> Result<LassoWord, ParseError> {
    let sep = if text.contains('|') { '|' } else { '$' };
    if sep == '$' && alphabet.iter().any(|l| l == "$") {
        return Err(err(1, "`$` is a letter here; separate prefix and period with `|`"));
    }
    let chars: Vec<char> = text.chars().collect();
    let seps: Vec<usize> = (0..chars.len()).filter(|&i| chars[i] == sep).collect();
    let split = match seps[..] {
        [i] => i,
        [] => return Err(err(1, format!("missing `{sep}` between prefix and period"))),
        [_, j, ..] => return Err(err(j + 1, format!("more than one `{sep}`"))),
    };
    let spaced = chars.iter().any(|c| c.is_whitespace());
    // (column, token) pairs.
    let tokens = |from: usize, to: usize| -> Vec<(usize, String)> {
        if !spaced {
            return (from..to).map(|i| (i + 1, chars[i].to_string())).collect();
        }
        let mut out = Vec::new();
        let mut i = from;
        while i < to {
            if chars[i].is_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            while i < to && !chars[i].is_whitespace() {
                i += 1;
            }
            out.push((start + 1, chars[start..i].iter().collect()));
        }
        out
    };
    let resolve = |ts: Vec<(usize, String)>| -> Result<Vec<usize>, ParseError> {
        ts.into_iter()
            .map(|(col, t)| alphabet.iter().position(|l| *l == t).ok_or_else(|| err(col, format!("unknown letter `{t}`"))))
            .collect()
    };
    let prefix = resolve(tokens(0, split))?;
    let period = resolve(tokens(split + 1, chars.len()))?;
    if period.is_empty() {
        return Err(err(split + 1, "the period is empty"));
    }
    Ok(LassoWord::new(prefix, period)?)
}

/// Space-separated letters; the separator is `|` when `$` is a letter.
pub fn write_lasso(w: &LassoWord, alphabet: &[String]) -> String {
    let sep = if alphabet.iter().any(|l| l == "$") { "|" } else { "$" };
    let join = |ls: &[usize]| ls.iter().map(|&l| alphabet[l].as_str()).collect::<Vec<_>>().join(" ");
    if w.prefix().is_empty() {
        format!("{sep} {}", join(w.period()))
    } else {
        format!("{} {sep} {}", join(w.prefix()), join(w.period()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Vec<String> {
        vec!["a".into(), "b".into()]
    }

    #[test]
    fn character_and_token_forms_agree() {
        let w = parse_lasso("ab$ba", &ab()).unwrap();
        assert_eq!((w.prefix(), w.period()), (&[0, 1][..], &[1, 0][..]));
        assert_eq!(parse_lasso(" a b $ b a ", &ab()).unwrap(), w);
        let w = parse_lasso("$ab", &ab()).unwrap();
        assert!(w.prefix().is_empty());
        assert_eq!(w.period(), &[0, 1]);
    }

    #[test]
    fn dollar_letters_need_the_bar() {
        let al: Vec<String> = ["1", "$", "!"].iter().map(|s| s.to_string()).collect();
        assert!(parse_lasso("$1!1", &al).is_err());
        let w = parse_lasso("|$1!1", &al).unwrap();
        assert_eq!(w.period(), &[1, 0, 2, 0]);
        assert_eq!(write_lasso(&w, &al), "| $ 1 ! 1");
        assert_eq!(parse_lasso(&write_lasso(&w, &al), &al).unwrap(), w);
    }

    #[test]
    fn errors_point_at_the_offending_column() {
        assert_eq!(parse_lasso("ab$", &ab()).unwrap_err(), err(3, "the period is empty"));
        assert_eq!(parse_lasso("ac$a", &ab()).unwrap_err(), err(2, "unknown letter `c`"));
        assert!(matches!(parse_lasso("ab", &ab()), Err(ParseError::Syntax { .. })));
    }
}
