//! Minimal s-expression reader for PDDL text.
//!
//! Symbols are lower-cased on read (PDDL is case-insensitive); comments run
//! from `;` to the end of the line.

use super::PddlError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SExpr {
    Symbol(String, Pos),
    List(Vec<SExpr>, Pos),
}

impl SExpr {
    pub fn pos(&self) -> Pos {
        match self {
            SExpr::Symbol(_, p) | SExpr::List(_, p) => *p,
        }
    }

    pub fn as_symbol(&self) -> Option<&str> {
        match self {
            SExpr::Symbol(s, _) => Some(s),
            SExpr::List(..) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(items, _) => Some(items),
            SExpr::Symbol(..) => None,
        }
    }

    /// Head symbol of a list, e.g. `and` for `(and ...)`.
    pub fn head(&self) -> Option<&str> {
        self.as_list().and_then(|l| l.first()).and_then(SExpr::as_symbol)
    }

    pub fn describe(&self) -> String {
        match self {
            SExpr::Symbol(s, _) => s.clone(),
            SExpr::List(items, _) => match items.first() {
                Some(first) => format!("({} ...)", first.describe()),
                None => "()".to_string(),
            },
        }
    }
}

pub(crate) fn syntax_error(pos: Pos, token: impl Into<String>, msg: impl Into<String>) -> PddlError {
    PddlError::Syntax {
        line: pos.line,
        col: pos.col,
        token: token.into(),
        msg: msg.into(),
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl Reader<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn read(&mut self) -> Result<Option<SExpr>, PddlError> {
        self.skip_trivia();
        let pos = self.pos();
        match self.chars.peek().copied() {
            None => Ok(None),
            Some(')') => Err(syntax_error(pos, ")", "unbalanced closing parenthesis")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return Err(syntax_error(pos, "(", "unterminated list")),
                        Some(')') => {
                            self.bump();
                            return Ok(Some(SExpr::List(items, pos)));
                        }
                        Some(_) => {
                            if let Some(item) = self.read()? {
                                items.push(item);
                            }
                        }
                    }
                }
            }
            Some(_) => {
                let mut sym = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    sym.extend(c.to_lowercase());
                    self.bump();
                }
                Ok(Some(SExpr::Symbol(sym, pos)))
            }
        }
    }
}

/// Reads exactly one top-level expression; trailing non-comment text is an error.
pub fn parse_single(text: &str) -> Result<SExpr, PddlError> {
    let mut reader = Reader {
        chars: text.chars().peekable(),
        line: 1,
        col: 1,
    };
    let first = reader
        .read()?
        .ok_or_else(|| syntax_error(reader.pos(), "<eof>", "empty input"))?;
    if let Some(extra) = reader.read()? {
        return Err(syntax_error(
            extra.pos(),
            extra.describe(),
            "unexpected content after top-level expression",
        ));
    }
    Ok(first)
}
