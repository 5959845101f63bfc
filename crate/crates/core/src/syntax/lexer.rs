use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Int(i64),
    Decimal(String),
    Str(String),
    LParen,
    RParen,
    Comma,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(i) => format!("integer `{i}`"),
            Tok::Decimal(d) => format!("decimal `{d}`"),
            Tok::Str(_) => "string literal".to_string(),
            Tok::LParen => "`(`".to_string(),
            Tok::RParen => "`)`".to_string(),
            Tok::Comma => "`,`".to_string(),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub offset: usize,
}

/// Maps byte offsets of a source snippet to line/column, with an origin so
/// that snippets cut out of a larger file report file positions.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Origin {
    pub line: usize,
    pub column: usize,
}

impl Default for Origin {
    fn default() -> Self {
        Origin { line: 1, column: 1 }
    }
}

impl Origin {
    pub(crate) fn error(self, src: &str, offset: usize, message: impl Into<String>, expected: &[&str]) -> ParseError {
        let before = &src[..offset.min(src.len())];
        let line_in = before.matches('\n').count();
        let col_in = before.rsplit('\n').next().map(|s| s.chars().count()).unwrap_or(0);
        let (line, column) = if line_in == 0 {
            (self.line, self.column + col_in)
        } else {
            (self.line + line_in, 1 + col_in)
        };
        ParseError {
            line,
            column,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '!' | '?')
}

pub(crate) fn tokenize(src: &str, origin: Origin) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        match c {
            '(' => {
                chars.next();
                out.push(Token {
                    tok: Tok::LParen,
                    offset: i,
                });
            }
            ')' => {
                chars.next();
                out.push(Token {
                    tok: Tok::RParen,
                    offset: i,
                });
            }
            ',' => {
                chars.next();
                out.push(Token {
                    tok: Tok::Comma,
                    offset: i,
                });
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                let mut closed = false;
                while let Some((_, c)) = chars.next() {
                    match c {
                        '"' => {
                            closed = true;
                            break;
                        }
                        '\\' => match chars.next() {
                            Some((_, '"')) => s.push('"'),
                            Some((_, '\\')) => s.push('\\'),
                            Some((_, 'n')) => s.push('\n'),
                            Some((j, other)) => {
                                return Err(origin.error(src, j, format!("unknown escape `\\{other}`"), &[]))
                            }
                            None => break,
                        },
                        c => s.push(c),
                    }
                }
                if !closed {
                    return Err(origin.error(src, i, "unterminated string literal", &["`\"`"]));
                }
                out.push(Token {
                    tok: Tok::Str(s),
                    offset: i,
                });
            }
            c if c.is_ascii_digit() || c == '-' => {
                let start = i;
                let mut end = i + c.len_utf8();
                chars.next();
                while let Some(&(j, d)) = chars.peek() {
                    if d.is_ascii_digit() || d == '.' {
                        end = j + 1;
                        chars.next();
                    } else {
                        break;
                    }
                }
                let text = &src[start..end];
                if let Some(&(j, d)) = chars.peek() {
                    if is_ident_char(d) {
                        return Err(origin.error(src, j, format!("unexpected `{d}` after number"), &[]));
                    }
                }
                let digits = text.strip_prefix('-').unwrap_or(text);
                let bad = |msg: &str| origin.error(src, start, format!("malformed number `{text}`: {msg}"), &[]);
                if digits.is_empty() || !digits.starts_with(|c: char| c.is_ascii_digit()) {
                    return Err(bad("expected digits"));
                }
                if let Some((int_part, frac)) = digits.split_once('.') {
                    if int_part.is_empty() || frac.is_empty() || frac.contains('.') {
                        return Err(bad("expected digits on both sides of `.`"));
                    }
                    out.push(Token {
                        tok: Tok::Decimal(text.to_string()),
                        offset: start,
                    });
                } else {
                    let v = text.parse::<i64>().map_err(|_| bad("out of range"))?;
                    out.push(Token {
                        tok: Tok::Int(v),
                        offset: start,
                    });
                }
            }
            c if is_ident_start(c) => {
                let start = i;
                let mut end = i;
                while let Some(&(j, d)) = chars.peek() {
                    if is_ident_char(d) {
                        end = j + d.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token {
                    tok: Tok::Ident(src[start..end].to_string()),
                    offset: start,
                });
            }
            other => return Err(origin.error(src, i, format!("unexpected character `{other}`"), &[])),
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        offset: src.len(),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s, Origin::default())
            .unwrap()
            .into_iter()
            .map(|t| t.tok)
            .collect()
    }

    #[test]
    fn lexes_names_with_punctuation() {
        assert_eq!(
            toks("at-least(4, hasPenguins!)"),
            vec![
                Tok::Ident("at-least".into()),
                Tok::LParen,
                Tok::Int(4),
                Tok::Comma,
                Tok::Ident("hasPenguins!".into()),
                Tok::RParen,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn lexes_literals() {
        assert_eq!(
            toks(r#"-3 2.50 "a\"b""#),
            vec![
                Tok::Int(-3),
                Tok::Decimal("2.50".into()),
                Tok::Str("a\"b".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn reports_positions() {
        let e = tokenize("and(A,\n  $B)", Origin::default()).unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = tokenize("\"open", Origin::default()).unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        assert!(tokenize("1.", Origin::default()).is_err());
        assert!(tokenize("12ab", Origin::default()).is_err());
    }
}
