//! Tokenizer and reader for the s-expression syntax shared by all text
//! formats. Besides `( )` lists it reads `{ }` groups, used for certificate
//! payloads.

use std::fmt;

use crate::error::ParseError;

/// 1-based line and column (in characters).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SExpr {
    /// Symbol, numeral, `#b`/`#x` literal, or a string literal kept with
    /// its quotes. `|quoted|` symbols are stored without the bars.
    Atom(String, Pos),
    List(Vec<SExpr>, Pos),
    Braces(Vec<SExpr>, Pos),
}

impl SExpr {
    pub fn pos(&self) -> Pos {
        match self {
            SExpr::Atom(_, p) | SExpr::List(_, p) | SExpr::Braces(_, p) => *p,
        }
    }

    pub fn atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(s, _) => Some(s),
            _ => None,
        }
    }

    pub fn list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(items, _) => Some(items),
            _ => None,
        }
    }

    /// Head symbol of a non-empty list.
    pub fn head(&self) -> Option<&str> {
        self.list()?.first()?.atom()
    }
}

/// Deepest nesting accepted; deeper input is an error rather than a stack
/// overflow.
pub const MAX_DEPTH: usize = 1000;

pub fn decode_utf8(bytes: &[u8]) -> Result<&str, ParseError> {
    std::str::from_utf8(bytes).map_err(|e| {
        let good = &bytes[..e.valid_up_to()];
        let text = std::str::from_utf8(good).unwrap_or_default();
        let line = text.matches('\n').count() as u32 + 1;
        let col = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) as u32 + 1;
        ParseError {
            line,
            col,
            message: "invalid UTF-8".into(),
        }
    })
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl Reader<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn read_atom(&mut self, start: Pos) -> Result<SExpr, ParseError> {
        let mut s = String::new();
        match self.chars.peek() {
            Some('|') => {
                self.bump();
                loop {
                    match self.bump() {
                        Some('|') => break,
                        Some(c) => s.push(c),
                        None => return Err(ParseError::at(start, "unterminated |quoted| symbol")),
                    }
                }
                return Ok(SExpr::Atom(s, start));
            }
            Some('"') => {
                s.push('"');
                self.bump();
                loop {
                    match self.bump() {
                        Some('"') if self.chars.peek() == Some(&'"') => {
                            self.bump();
                            s.push_str("\"\"");
                        }
                        Some('"') => break,
                        Some(c) => s.push(c),
                        None => return Err(ParseError::at(start, "unterminated string literal")),
                    }
                }
                s.push('"');
                return Ok(SExpr::Atom(s, start));
            }
            _ => {}
        }
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() || matches!(c, '(' | ')' | '{' | '}' | ';' | '|' | '"') {
                break;
            }
            s.push(c);
            self.bump();
        }
        Ok(SExpr::Atom(s, start))
    }

    /// Reads one expression; the caller has skipped trivia and checked
    /// that input remains.
    fn read(&mut self) -> Result<SExpr, ParseError> {
        // Explicit stack of open groups: (items, start, closing char).
        let mut stack: Vec<(Vec<SExpr>, Pos, char)> = Vec::new();
        loop {
            self.skip_trivia();
            let start = self.pos;
            let done = match self.chars.peek().copied() {
                None => {
                    let (_, open, _) = stack.last().expect("caller checked for input");
                    return Err(ParseError::at(*open, "unclosed group"));
                }
                Some(c @ ('(' | '{')) => {
                    if stack.len() >= MAX_DEPTH {
                        return Err(ParseError::at(start, "nesting too deep"));
                    }
                    self.bump();
                    stack.push((Vec::new(), start, if c == '(' { ')' } else { '}' }));
                    None
                }
                Some(c @ (')' | '}')) => {
                    let Some((items, open, close)) = stack.pop() else {
                        return Err(ParseError::at(start, format!("unexpected `{c}`")));
                    };
                    if c != close {
                        return Err(ParseError::at(
                            start,
                            format!("expected `{close}`, found `{c}`"),
                        ));
                    }
                    self.bump();
                    Some(if close == ')' {
                        SExpr::List(items, open)
                    } else {
                        SExpr::Braces(items, open)
                    })
                }
                Some(_) => Some(self.read_atom(start)?),
            };
            if let Some(e) = done {
                match stack.last_mut() {
                    Some((items, _, _)) => items.push(e),
                    None => return Ok(e),
                }
            }
        }
    }
}

/// Reads every top-level expression of `text`.
pub fn read_all(text: &str) -> Result<Vec<SExpr>, ParseError> {
    let mut r = Reader {
        chars: text.chars().peekable(),
        pos: Pos { line: 1, col: 1 },
    };
    let mut out = Vec::new();
    loop {
        r.skip_trivia();
        if r.chars.peek().is_none() {
            return Ok(out);
        }
        out.push(r.read()?);
    }
}
