//! Line-oriented text format:
//!
//! ```text
//! # comment
//! dim 2
//! map 1/3 0 ; 1/6 0
//! ```

use crate::error::{Error, Result};
use crate::ifs::{AffineMap, DiagonalMap, SpongeIfs};
use crate::scalar::{parse_rational, Scalar};

/// A whitespace-delimited token and its 1-based column.
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        let boundary = ch.is_whitespace() || ch == ';';
        match (start, boundary) {
            (None, false) => start = Some(i),
            (Some(s), true) => {
                out.push(Token {
                    text: &line[s..i],
                    column: line[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
        if ch == ';' {
            out.push(Token {
                text: ";",
                column: line[..i].chars().count() + 1,
            });
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: line[..s].chars().count() + 1,
        });
    }
    out
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn scalar<S: Scalar>(line: usize, tok: &Token<'_>) -> Result<S> {
    match parse_rational(tok.text) {
        Ok(q) => Ok(S::from_rational(&q)),
        Err(Error::DivisionByZero) => Err(syntax(line, tok.column, "zero denominator")),
        Err(_) => Err(syntax(
            line,
            tok.column,
            format!("expected integer or p/q literal, found `{}`", tok.text),
        )),
    }
}

pub fn parse_ifs<S: Scalar>(text: &str) -> Result<SpongeIfs<S>> {
    let mut dim: Option<usize> = None;
    let mut maps = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(head) = toks.first() else { continue };
        match head.text {
            "dim" => {
                if dim.is_some() {
                    return Err(syntax(lineno, head.column, "duplicate `dim` directive"));
                }
                let arg = toks
                    .get(1)
                    .ok_or_else(|| syntax(lineno, content.len() + 1, "missing dimension"))?;
                if let Some(extra) = toks.get(2) {
                    return Err(syntax(lineno, extra.column, "unexpected token after dimension"));
                }
                let d: i64 = arg.text.parse().map_err(|_| {
                    syntax(lineno, arg.column, format!("invalid dimension `{}`", arg.text))
                })?;
                if d < 1 {
                    return Err(Error::Dimension(arg.text.to_string()));
                }
                dim = Some(d as usize);
            }
            "map" => {
                let d = dim.ok_or_else(|| {
                    syntax(lineno, head.column, "`map` before the `dim` directive")
                })?;
                let groups: Vec<&[Token<'_>]> = toks[1..].split(|t| t.text == ";").collect();
                if groups.len() != d {
                    return Err(Error::CoordinateCount {
                        line: lineno,
                        expected: d,
                        found: groups.len(),
                    });
                }
                let mut coords = Vec::with_capacity(d);
                for group in groups {
                    match group {
                        [r, o] => {
                            let ratio: S = scalar(lineno, r)?;
                            let offset: S = scalar(lineno, o)?;
                            let m = AffineMap::new(ratio, offset).map_err(|_| {
                                Error::RatioOutOfRange {
                                    line: lineno,
                                    ratio: r.text.to_string(),
                                }
                            })?;
                            coords.push(m);
                        }
                        [] => {
                            return Err(syntax(lineno, head.column, "empty coordinate pair"));
                        }
                        [only] => {
                            return Err(syntax(
                                lineno,
                                only.column,
                                "coordinate needs a ratio and an offset",
                            ));
                        }
                        [_, _, extra, ..] => {
                            return Err(syntax(
                                lineno,
                                extra.column,
                                "too many values in coordinate pair",
                            ));
                        }
                    }
                }
                maps.push(DiagonalMap::new(coords));
            }
            other => {
                return Err(syntax(
                    lineno,
                    head.column,
                    format!("unknown directive `{other}`"),
                ));
            }
        }
    }
    let dim = dim.ok_or_else(|| syntax(last_line.max(1), 1, "missing `dim` directive"))?;
    SpongeIfs::new(dim, maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn smallest_input() {
        let ifs: SpongeIfs<Rational> = parse_ifs("dim 1\nmap 1/3 0").unwrap();
        assert_eq!(ifs.dim(), 1);
        assert_eq!(ifs.len(), 1);
        assert_eq!(ifs.map(0).coord(0).ratio(), &q(1, 3));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\n\n dim 2 # two\nmap 1/2 0;1/4 0\n  # trailing\nmap 1/2 1/2 ; 1/4 3/4\n";
        let ifs: SpongeIfs<Rational> = parse_ifs(text).unwrap();
        assert_eq!(ifs.len(), 2);
        assert_eq!(ifs.map(1).coord(1).offset(), &q(3, 4));
    }

    #[test]
    fn ratio_out_of_range() {
        let err = parse_ifs::<Rational>("dim 2\nmap 3/2 0 ; 1/6 0").unwrap_err();
        assert_eq!(
            err,
            Error::RatioOutOfRange {
                line: 2,
                ratio: "3/2".into()
            }
        );
    }

    #[test]
    fn coordinate_count() {
        let err = parse_ifs::<Rational>("dim 2\nmap 1/3 0").unwrap_err();
        assert!(matches!(
            err,
            Error::CoordinateCount {
                line: 2,
                expected: 2,
                found: 1
            }
        ));
    }

    #[test]
    fn dimension_errors() {
        assert!(matches!(
            parse_ifs::<Rational>("dim 0\nmap 1/2 0"),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            parse_ifs::<Rational>("map 1/2 0"),
            Err(Error::Syntax { line: 1, column: 1, .. })
        ));
        assert!(matches!(
            parse_ifs::<Rational>(""),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn syntax_positions() {
        let err = parse_ifs::<Rational>("dim 1\nmap 1/2 x").unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 2,
                column: 9,
                message: "expected integer or p/q literal, found `x`".into()
            }
        );
        let err = parse_ifs::<Rational>("dim 1\nfoo").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, column: 1, .. }));
        let err = parse_ifs::<Rational>("dim 1\nmap 1/2 0 1").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, column: 11, .. }));
    }

    #[test]
    fn round_trip() {
        let text = "dim 2\nmap 1/3 0 ; 1/6 0\nmap 1/2 1/2 ; 1/5 4/5\n";
        let ifs: SpongeIfs<Rational> = parse_ifs(text).unwrap();
        assert_eq!(ifs.to_string(), text);
        assert_eq!(parse_ifs::<Rational>(&ifs.to_string()).unwrap(), ifs);
    }
}
