//! Concrete syntax for circuit terms and `.cc` files.
//!
//! ```text
//! seq   := par (';' par)*
//! par   := atom ('*' atom)*
//! atom  := '(' seq ')' | 'del' | 'copy' | 'and' | 'not' | 'swap' | 'empty'
//!        | 'id' ('^' INT)? | 'st' '(' NUMBER ')'
//! file  := (seq ';')? 'chain' '(' seq ')' | seq
//! ```

use super::{Arity, Term};
use crate::error::{Error, Result, SourceSpan};

/// What a `.cc` file denotes: a finite circuit, or a Markov chain plate
/// `chain(step)` optionally preceded by a circuit feeding its initial state.
#[derive(Debug, Clone, PartialEq)]
pub enum Descriptor {
    Term(Term),
    Chain { init: Option<Term>, step: Term },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CcFile {
    pub descriptor: Descriptor,
    /// From an `-- arity m -> n` line.
    pub declared: Option<Arity>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    LParen,
    RParen,
    Semi,
    Star,
    Caret,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
    len: usize,
}

fn lex(text: &str, file: Option<&str>) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let start = i;
            let tok = match c {
                c if c.is_whitespace() => {
                    i += 1;
                    continue;
                }
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ';' => Tok::Semi,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                c if c.is_ascii_alphabetic() => {
                    while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                        i += 1;
                    }
                    Tok::Ident(chars[start..=i].iter().collect())
                }
                c if c.is_ascii_digit() || c == '.' || c == '-' || c == '+' => {
                    while i + 1 < chars.len() {
                        let n = chars[i + 1];
                        let exp_sign = (n == '-' || n == '+') && matches!(chars[i], 'e' | 'E');
                        if n.is_ascii_digit() || n == '.' || n == 'e' || n == 'E' || exp_sign {
                            i += 1;
                        } else {
                            break;
                        }
                    }
                    Tok::Number(chars[start..=i].iter().collect())
                }
                other => {
                    return Err(Error::Syntax {
                        span: span(file, li + 1, start + 1, 1),
                        message: format!("unexpected character {other:?}"),
                    })
                }
            };
            i += 1;
            out.push(Token {
                tok,
                line: li + 1,
                col: start + 1,
                len: i - start,
            });
        }
    }
    Ok(out)
}

fn span(file: Option<&str>, line: usize, col: usize, len: usize) -> SourceSpan {
    SourceSpan {
        file: file.map(str::to_owned),
        line,
        col_start: col,
        col_end: col + len,
    }
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    file: Option<&'a str>,
    eof: SourceSpan,
}

impl<'a> Parser<'a> {
    fn new(text: &str, file: Option<&'a str>) -> Result<Self> {
        let tokens = lex(text, file)?;
        let (line, col) = tokens
            .last()
            .map_or((1, 1), |t| (t.line, t.col + t.len));
        Ok(Self {
            tokens,
            pos: 0,
            file,
            eof: span(file, line, col, 0),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn span_here(&self) -> SourceSpan {
        match self.tokens.get(self.pos) {
            Some(t) => span(self.file, t.line, t.col, t.len),
            None => self.eof.clone(),
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            span: self.span_here(),
            message: message.into(),
        })
    }

    fn describe(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(Tok::Ident(s)) | Some(Tok::Number(s)) => format!("{s:?}"),
            Some(Tok::LParen) => "'('".into(),
            Some(Tok::RParen) => "')'".into(),
            Some(Tok::Semi) => "';'".into(),
            Some(Tok::Star) => "'*'".into(),
            Some(Tok::Caret) => "'^'".into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            let found = self.describe();
            self.error(format!("expected {what}, found {found}"))
        }
    }

    fn finish(&self) -> Result<()> {
        if self.pos < self.tokens.len() {
            let found = self.describe();
            return self.error(format!("unexpected {found} after term"));
        }
        Ok(())
    }

    fn seq(&mut self) -> Result<(Term, Arity)> {
        let first = self.par()?;
        self.seq_rest(first)
    }

    fn seq_rest(&mut self, (mut term, mut arity): (Term, Arity)) -> Result<(Term, Arity)> {
        while self.peek() == Some(&Tok::Semi) {
            let op = self.span_here();
            self.pos += 1;
            let (next, next_arity) = self.par()?;
            term = join_seq(term, arity, next, next_arity, op)?;
            arity = Arity::new(arity.inputs, next_arity.outputs);
        }
        Ok((term, arity))
    }

    fn par(&mut self) -> Result<(Term, Arity)> {
        let (mut term, mut arity) = self.atom()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let (next, next_arity) = self.atom()?;
            term = Term::par(term, next);
            arity = Arity::new(arity.inputs + next_arity.inputs, arity.outputs + next_arity.outputs);
        }
        Ok((term, arity))
    }

    fn atom(&mut self) -> Result<(Term, Arity)> {
        let name = match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.seq()?;
                self.expect(Tok::RParen, "')'")?;
                return Ok(inner);
            }
            Some(Tok::Ident(name)) => name.clone(),
            _ => {
                let found = self.describe();
                return self.error(format!("expected a term, found {found}"));
            }
        };
        let term = match name.as_str() {
            "del" => Term::Del,
            "copy" => Term::Copy,
            "and" => Term::And,
            "not" => Term::Not,
            "swap" => Term::Swap,
            "empty" => Term::Empty,
            "id" => {
                self.pos += 1;
                if self.peek() != Some(&Tok::Caret) {
                    return Ok((Term::Id(1), Arity::new(1, 1)));
                }
                self.pos += 1;
                let k = match self.peek() {
                    Some(Tok::Number(s)) => s.parse::<usize>().ok(),
                    _ => None,
                };
                let Some(k) = k else {
                    return self.error("expected a wire count after '^'");
                };
                self.pos += 1;
                return Ok((Term::Id(k), Arity::new(k, k)));
            }
            "st" => {
                self.pos += 1;
                self.expect(Tok::LParen, "'(' after st")?;
                let at = self.span_here();
                let value = match self.peek() {
                    Some(Tok::Number(s)) => s.parse::<f64>().ok(),
                    _ => None,
                };
                let Some(value) = value else {
                    return self.error("expected a probability");
                };
                if !(0.0..=1.0).contains(&value) {
                    return Err(Error::StateRange { span: Some(at), value });
                }
                self.pos += 1;
                self.expect(Tok::RParen, "')'")?;
                return Ok((Term::State(value), Arity::new(0, 1)));
            }
            "chain" => return self.error("chain(...) may only appear as the last stage of a file"),
            other => return self.error(format!("unknown generator {other:?}")),
        };
        self.pos += 1;
        let arity = term.arity()?;
        Ok((term, arity))
    }

    fn descriptor(&mut self) -> Result<Descriptor> {
        let mut init: Option<(Term, Arity)> = None;
        loop {
            if self.peek() == Some(&Tok::Ident("chain".into())) {
                let at = self.span_here();
                self.pos += 1;
                self.expect(Tok::LParen, "'(' after chain")?;
                let (step, arity) = self.seq()?;
                self.expect(Tok::RParen, "')'")?;
                self.finish()?;
                if arity.inputs != arity.outputs || arity.inputs == 0 {
                    return Err(Error::Syntax {
                        span: at,
                        message: format!("chain step must have arity k -> k with k >= 1, got {arity}"),
                    });
                }
                if let Some((_, init_arity)) = &init {
                    if init_arity.outputs != arity.inputs {
                        return Err(Error::Arity {
                            span: Some(at),
                            left: *init_arity,
                            right: arity,
                        });
                    }
                }
                return Ok(Descriptor::Chain {
                    init: init.map(|(t, _)| t),
                    step,
                });
            }
            let stage = self.par()?;
            let op = self.span_here();
            init = Some(match init.take() {
                None => stage,
                Some((t, a)) => {
                    let arity = Arity::new(a.inputs, stage.1.outputs);
                    (join_seq(t, a, stage.0, stage.1, op.clone())?, arity)
                }
            });
            match self.peek() {
                Some(Tok::Semi) => self.pos += 1,
                _ => {
                    self.finish()?;
                    return Ok(Descriptor::Term(init.expect("at least one stage").0));
                }
            }
        }
    }
}

fn join_seq(left: Term, la: Arity, right: Term, ra: Arity, op: SourceSpan) -> Result<Term> {
    if la.outputs != ra.inputs {
        return Err(Error::Arity {
            span: Some(op),
            left: la,
            right: ra,
        });
    }
    Ok(Term::seq(left, right))
}

/// Parses and arity-checks a single term.
pub fn parse(text: &str) -> Result<Term> {
    let mut p = Parser::new(text, None)?;
    let (term, _) = p.seq()?;
    p.finish()?;
    Ok(term)
}

/// Parses a term, or a term followed by a final `chain(step)` stage.
pub fn parse_descriptor(text: &str, file: Option<&str>) -> Result<Descriptor> {
    Parser::new(text, file)?.descriptor()
}

/// Parses a `.cc` file: `#` comments, one descriptor, and an optional
/// `-- arity m -> n` line checked against the term (or the chain step).
pub fn parse_file(text: &str, file: Option<&str>) -> Result<CcFile> {
    let mut declared = None;
    let mut body = String::with_capacity(text.len());
    for (li, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        if let Some(rest) = line.trim_start().strip_prefix("--") {
            let words: Vec<&str> = rest.split_whitespace().collect();
            let parsed = match words.as_slice() {
                ["arity", m, "->", n] => m.parse().ok().zip(n.parse().ok()),
                _ => None,
            };
            let Some((m, n)) = parsed else {
                return Err(Error::Syntax {
                    span: span(file, li + 1, 1, line.chars().count()),
                    message: "expected `-- arity m -> n`".into(),
                });
            };
            declared = Some(Arity::new(m, n));
            body.push('\n');
            continue;
        }
        body.push_str(line);
        body.push('\n');
    }
    let descriptor = parse_descriptor(&body, file)?;
    if let Some(declared) = declared {
        let found = match &descriptor {
            Descriptor::Term(t) => t.arity()?,
            Descriptor::Chain { step, .. } => step.arity()?,
        };
        if found != declared {
            return Err(Error::ArityAssertion { declared, found });
        }
    }
    Ok(CcFile { descriptor, declared })
}
