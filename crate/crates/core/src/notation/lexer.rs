use crate::syntax::{Connective, Quantifier};

use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    LParen,
    RParen,
    Comma,
    Semicolon,
    Turnstile,
    Yields,
    LBracket,
    RBracket,
    Conn(Connective),
    Quant(Quantifier),
    /// Uppercase letter with an optional `_n` index.
    Upper(char, Option<u32>),
    /// Lowercase letter with an optional `_n` index.
    Lower(char, Option<u32>),
    Phi(u32),
    Tau(u32),
    Ctx(u32),
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semicolon => "`;`".into(),
            Tok::Turnstile => "`|-`".into(),
            Tok::Yields => "`=>`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Conn(c) => format!("`{}`", c.ascii()),
            Tok::Quant(q) => format!("quantifier `{}`", q.ascii()),
            Tok::Upper(c, i) | Tok::Lower(c, i) => match i {
                Some(n) => format!("`{c}_{n}`"),
                None => format!("`{c}`"),
            },
            Tok::Phi(n) => format!("`phi{n}`"),
            Tok::Tau(n) => format!("`tau{n}`"),
            Tok::Ctx(n) => format!("`G{n}`"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    /// Character offset of the token's first character.
    pub pos: usize,
}

pub(crate) const VARIABLE_LETTERS: &[char] = &['x', 'y', 'z', 'w', 'u', 'v'];

pub(crate) fn tokenize(text: &str) -> Result<(Vec<Spanned>, usize), ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let starts = |i: usize, s: &str| {
        let s: Vec<char> = s.chars().collect();
        chars.len() >= i + s.len() && chars[i..i + s.len()] == s[..]
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let pos = i;
        let (tok, len) = if starts(i, "<->") {
            (Tok::Conn(Connective::Iff), 3)
        } else if starts(i, "->") {
            (Tok::Conn(Connective::If), 2)
        } else if starts(i, "/\\") {
            (Tok::Conn(Connective::And), 2)
        } else if starts(i, "\\/") {
            (Tok::Conn(Connective::Or), 2)
        } else if starts(i, "|-") {
            (Tok::Turnstile, 2)
        } else if starts(i, "=>") {
            (Tok::Yields, 2)
        } else {
            match c {
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                ',' => (Tok::Comma, 1),
                ';' => (Tok::Semicolon, 1),
                '[' => (Tok::LBracket, 1),
                ']' => (Tok::RBracket, 1),
                '~' | '¬' => (Tok::Conn(Connective::Neg), 1),
                '∧' => (Tok::Conn(Connective::And), 1),
                '∨' => (Tok::Conn(Connective::Or), 1),
                '→' => (Tok::Conn(Connective::If), 1),
                '↔' => (Tok::Conn(Connective::Iff), 1),
                '∀' => (Tok::Quant(Quantifier::All), 1),
                '∃' => (Tok::Quant(Quantifier::Some), 1),
                '⊢' => (Tok::Turnstile, 1),
                'φ' | 'τ' | 'Γ' => {
                    let (n, len) = digits(&chars, i + 1).ok_or_else(|| ParseError::Syntax {
                        position: i + 1,
                        expected: "an index".into(),
                        found: found_at(&chars, i + 1),
                    })?;
                    let tok = match c {
                        'φ' => Tok::Phi(n),
                        'τ' => Tok::Tau(n),
                        _ => Tok::Ctx(n),
                    };
                    (tok, 1 + len)
                }
                'A' | 'E' if chars.get(i + 1).is_some_and(|n| VARIABLE_LETTERS.contains(n)) => {
                    let q = if c == 'A' {
                        Quantifier::All
                    } else {
                        Quantifier::Some
                    };
                    (Tok::Quant(q), 1)
                }
                'G' if chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) => {
                    let (n, len) = digits(&chars, i + 1).unwrap();
                    (Tok::Ctx(n), 1 + len)
                }
                c if c.is_ascii_lowercase() => {
                    if starts(i, "phi") || starts(i, "tau") {
                        match digits(&chars, i + 3) {
                            Some((n, len)) if starts(i, "phi") => (Tok::Phi(n), 3 + len),
                            Some((n, len)) => (Tok::Tau(n), 3 + len),
                            None => {
                                return Err(ParseError::Syntax {
                                    position: i + 3,
                                    expected: "an index".into(),
                                    found: found_at(&chars, i + 3),
                                })
                            }
                        }
                    } else {
                        let (idx, len) = suffix(&chars, i + 1)?;
                        (Tok::Lower(c, idx), 1 + len)
                    }
                }
                c if c.is_ascii_uppercase() => {
                    let (idx, len) = suffix(&chars, i + 1)?;
                    (Tok::Upper(c, idx), 1 + len)
                }
                other => {
                    return Err(ParseError::UnknownSymbol {
                        position: i,
                        symbol: other.to_string(),
                    })
                }
            }
        };
        out.push(Spanned { tok, pos });
        i += len;
    }
    Ok((out, chars.len()))
}

fn digits(chars: &[char], start: usize) -> Option<(u32, usize)> {
    let mut j = start;
    while j < chars.len() && chars[j].is_ascii_digit() {
        j += 1;
    }
    if j == start {
        return None;
    }
    let s: String = chars[start..j].iter().collect();
    s.parse().ok().map(|n| (n, j - start))
}

// Parses an optional `_n` suffix.
fn suffix(chars: &[char], start: usize) -> Result<(Option<u32>, usize), ParseError> {
    if chars.get(start) != Some(&'_') {
        return Ok((None, 0));
    }
    match digits(chars, start + 1) {
        Some((n, len)) => Ok((Some(n), 1 + len)),
        None => Err(ParseError::Syntax {
            position: start + 1,
            expected: "an index after `_`".into(),
            found: found_at(chars, start + 1),
        }),
    }
}

fn found_at(chars: &[char], i: usize) -> String {
    chars
        .get(i)
        .map(|c| format!("`{c}`"))
        .unwrap_or_else(|| "end of input".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().0.into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn ascii_and_unicode_agree() {
        assert_eq!(toks("P /\\ R -> Q \\/ S"), toks("P ∧ R → Q ∨ S"));
        assert_eq!(toks("~P <-> Q"), toks("¬P ↔ Q"));
        assert_eq!(toks("AxEyF(x,y)"), toks("∀x∃yF(x,y)"));
    }

    #[test]
    fn indices_and_schematics() {
        assert_eq!(toks("P_3"), vec![Tok::Upper('P', Some(3))]);
        assert_eq!(toks("phi2(tau1)")[0], Tok::Phi(2));
        assert_eq!(toks("φ2")[0], Tok::Phi(2));
        assert_eq!(toks("G1, phi1 |- phi2"), vec![
            Tok::Ctx(1),
            Tok::Comma,
            Tok::Phi(1),
            Tok::Turnstile,
            Tok::Phi(2)
        ]);
    }

    #[test]
    fn positions_are_character_offsets() {
        let (t, end) = tokenize("¬P → Q").unwrap();
        assert_eq!(t.iter().map(|s| s.pos).collect::<Vec<_>>(), vec![0, 1, 3, 5]);
        assert_eq!(end, 6);
    }
}
