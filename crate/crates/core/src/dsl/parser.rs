use super::ast::{DiagramTerm, Generator, Node, Span};
use super::DslError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64, String),
    LParen,
    RParen,
    Comma,
    Semi,
    Star,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    src: &'a str,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, line: usize, col: usize) -> Self {
        Self { chars: src.char_indices().peekable(), src, line, col }
    }

    fn bump(&mut self) -> Option<(usize, char)> {
        let next = self.chars.next();
        if let Some((_, c)) = next {
            if c == '\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
        next
    }

    fn tokens(mut self) -> Result<Vec<(Tok, Span)>, DslError> {
        let mut out = Vec::new();
        while let Some(&(start, c)) = self.chars.peek() {
            let span = Span { line: self.line, col: self.col };
            if c.is_whitespace() {
                self.bump();
                continue;
            }
            let single = match c {
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                ',' => Some(Tok::Comma),
                ';' => Some(Tok::Semi),
                '*' => Some(Tok::Star),
                _ => None,
            };
            if let Some(t) = single {
                self.bump();
                out.push((t, span));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let mut end = start;
                while let Some(&(i, c)) = self.chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                        end = i + c.len_utf8();
                        self.bump();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(self.src[start..end].to_string()), span));
            } else if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' {
                let mut end = start;
                let mut prev = ' ';
                while let Some(&(i, c)) = self.chars.peek() {
                    let sign_ok = (c == '-' || c == '+') && (i == start || prev == 'e' || prev == 'E');
                    if c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' || sign_ok {
                        end = i + 1;
                        prev = c;
                        self.bump();
                    } else {
                        break;
                    }
                }
                let text = &self.src[start..end];
                let value = text.parse::<f64>().map_err(|_| DslError::SyntaxError {
                    line: span.line,
                    col: span.col,
                    message: format!("malformed number `{text}`"),
                })?;
                out.push((Tok::Number(value, text.to_string()), span));
            } else {
                return Err(DslError::SyntaxError { line: span.line, col: span.col, message: format!("unexpected character `{c}`") });
            }
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    end: Span,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn span(&self) -> Span {
        self.toks.get(self.pos).map(|(_, s)| *s).unwrap_or(self.end)
    }

    fn error(&self, message: impl Into<String>) -> DslError {
        let s = self.span();
        DslError::SyntaxError { line: s.line, col: s.col, message: message.into() }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), DslError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn seq(&mut self) -> Result<DiagramTerm, DslError> {
        let mut lhs = self.par()?;
        while self.peek() == Some(&Tok::Semi) {
            self.pos += 1;
            let rhs = self.par()?;
            let span = lhs.span;
            lhs = DiagramTerm::new(Node::Seq(Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn par(&mut self) -> Result<DiagramTerm, DslError> {
        let mut lhs = self.atom()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let rhs = self.atom()?;
            let span = lhs.span;
            lhs = DiagramTerm::new(Node::Par(Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn args(&mut self) -> Result<Vec<(f64, String, Span)>, DslError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        loop {
            let span = self.span();
            match self.peek().cloned() {
                Some(Tok::Number(v, text)) => {
                    self.pos += 1;
                    args.push((v, text, span));
                }
                _ => return Err(self.error("expected a number")),
            }
            match self.peek() {
                Some(Tok::Comma) => self.pos += 1,
                Some(Tok::RParen) => {
                    self.pos += 1;
                    return Ok(args);
                }
                _ => return Err(self.error("expected `,` or `)`")),
            }
        }
    }

    fn atom(&mut self) -> Result<DiagramTerm, DslError> {
        let span = self.span();
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.seq()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "dag" {
                    self.expect(Tok::LParen, "`(` after dag")?;
                    let inner = self.seq()?;
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(DiagramTerm::new(Node::Dag(Box::new(inner)), span));
                }
                let g = self.generator(&name, span)?;
                Ok(DiagramTerm::new(Node::Gen(g), span))
            }
            Some(_) => Err(self.error("expected a generator, `dag(` or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn generator(&mut self, name: &str, span: Span) -> Result<Generator, DslError> {
        let plain = match name {
            "zmult" => Some(Generator::ZMult),
            "zunit" => Some(Generator::ZUnit),
            "zcomult" => Some(Generator::ZComult),
            "zcounit" => Some(Generator::ZCounit),
            "xmult" => Some(Generator::XMult),
            "xunit" => Some(Generator::XUnit),
            "xcomult" => Some(Generator::XComult),
            "xcounit" => Some(Generator::XCounit),
            "antipode" => Some(Generator::Antipode),
            "swap" => Some(Generator::Swap),
            "cup" => Some(Generator::Cup),
            "cap" => Some(Generator::Cap),
            "sysalg" => Some(Generator::SysAlg),
            "sysid" | "sysdim-id" => Some(Generator::SysId),
            _ => None,
        };
        if let Some(g) = plain {
            return Ok(g);
        }
        let arity = match name {
            "id" | "tstate" | "estate" | "sysket" => 1,
            "scalar" => 2,
            _ => return Err(DslError::UnknownGenerator { name: name.to_string(), line: span.line, col: span.col }),
        };
        let args = self.args()?;
        if args.len() != arity {
            return Err(DslError::SyntaxError {
                line: span.line,
                col: span.col,
                message: format!("`{name}` takes {arity} argument(s), got {}", args.len()),
            });
        }
        let int = |(v, text, s): &(f64, String, Span)| -> Result<i64, DslError> {
            if v.fract() == 0.0 && v.abs() < 1e15 {
                Ok(*v as i64)
            } else {
                Err(DslError::SyntaxError { line: s.line, col: s.col, message: format!("expected an integer, got `{text}`") })
            }
        };
        let natural = |a: &(f64, String, Span)| -> Result<usize, DslError> {
            let n = int(a)?;
            usize::try_from(n).map_err(|_| DslError::SyntaxError {
                line: a.2.line,
                col: a.2.col,
                message: format!("expected a non-negative integer, got `{}`", a.1),
            })
        };
        Ok(match name {
            "id" => Generator::Id(natural(&args[0])?),
            "tstate" => Generator::TState(int(&args[0])?),
            "estate" => Generator::EState(int(&args[0])?),
            "sysket" => Generator::SysKet(natural(&args[0])?),
            _ => Generator::Scalar(args[0].0, args[1].0),
        })
    }
}

/// Parses a term. Line and column numbers in errors count from the given
/// origin, so terms embedded in larger files report file positions.
pub fn parse_at(src: &str, line: usize, col: usize) -> Result<DiagramTerm, DslError> {
    let toks = Lexer::new(src, line, col).tokens()?;
    let end = toks.last().map(|(_, s)| Span { line: s.line, col: s.col + 1 }).unwrap_or(Span { line, col });
    let mut p = Parser { toks, pos: 0, end };
    let term = p.seq()?;
    if p.pos != p.toks.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(term)
}

pub fn parse(src: &str) -> Result<DiagramTerm, DslError> {
    parse_at(src, 1, 1)
}
