use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Backslash,
    Colon,
    Dot,
    Comma,
    LParen,
    RParen,
    Amp,
    Bar,
    Tilde,
    Implies,
    RevImplies,
    Equals,
    Arrow,
    At,
    Question,
    Caret,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{}`", s),
            Tok::Backslash => "`\\`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Implies => "`=>`".into(),
            Tok::RevImplies => "`<=`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::At => "`@`".into(),
            Tok::Question => "`?`".into(),
            Tok::Caret => "`^`".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
    /// Byte offset of the token in the input.
    pub offset: usize,
    /// Whether whitespace separates this token from the previous one.
    pub spaced: bool,
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Splits `src` into tokens. `first_line` is the line number of the first
/// input line, so that positions inside problem files are reported correctly.
/// A `#` starts a comment running to the end of the line.
pub fn tokenize(src: &str, first_line: usize) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut line = first_line;
    let mut col = 1;
    let mut spaced = true;
    let mut chars = src.char_indices().peekable();
    while let Some(&(offset, c)) = chars.peek() {
        let (start_line, start_col) = (line, col);
        let mut push = |tok: Tok, spaced: &mut bool| {
            out.push(Token {
                tok,
                line: start_line,
                column: start_col,
                offset,
                spaced: *spaced,
            });
            *spaced = false;
        };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
                spaced = true;
                continue;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
                spaced = true;
                continue;
            }
            '#' => {
                while let Some(&(_, c)) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
                continue;
            }
            c if ident_start(c) || c.is_ascii_digit() => {
                let mut name = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if !ident_char(c) {
                        break;
                    }
                    name.push(c);
                    chars.next();
                    col += 1;
                }
                push(Tok::Ident(name), &mut spaced);
                continue;
            }
            _ => {}
        }
        chars.next();
        col += 1;
        let next = chars.peek().map(|&(_, c)| c);
        let tok = match (c, next) {
            ('=', Some('>')) => {
                chars.next();
                col += 1;
                Tok::Implies
            }
            ('<', Some('=')) => {
                chars.next();
                col += 1;
                Tok::RevImplies
            }
            ('-', Some('>')) => {
                chars.next();
                col += 1;
                Tok::Arrow
            }
            ('=', _) => Tok::Equals,
            ('\\', _) => Tok::Backslash,
            (':', _) => Tok::Colon,
            ('.', _) => Tok::Dot,
            (',', _) => Tok::Comma,
            ('(', _) => Tok::LParen,
            (')', _) => Tok::RParen,
            ('&', _) => Tok::Amp,
            ('|', _) => Tok::Bar,
            ('~', _) => Tok::Tilde,
            ('@', _) => Tok::At,
            ('?', _) => Tok::Question,
            ('^', _) => Tok::Caret,
            _ => {
                return Err(Error::Syntax {
                    line: start_line,
                    column: start_col,
                    message: format!("unexpected character `{}`", c),
                })
            }
        };
        push(tok, &mut spaced);
    }
    Ok(out)
}
