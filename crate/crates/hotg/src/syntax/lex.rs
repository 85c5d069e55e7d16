//! Lexer for the article language. ASCII-first, with the Unicode aliases
//! from the paper accepted on input.

use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    AtBracket, // @[
    Comma,
    Dot,
    Colon,
    ColonEq, // :=
    Arrow,   // ->
    DArrow,  // =>
    Bar,     // |
    Tilde,   // ~
    Wedge,   // /\
    Vee,     // \/
    IffTok,  // <->
    EqTok,   // =
    NeTok,   // <>
    InTok,   // :e
    NotinTok,   // /:e
    SubqTok, // c=
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::LBrace => write!(f, "{{"),
            Tok::RBrace => write!(f, "}}"),
            Tok::LBracket => write!(f, "["),
            Tok::RBracket => write!(f, "]"),
            Tok::AtBracket => write!(f, "@["),
            Tok::Comma => write!(f, ","),
            Tok::Dot => write!(f, "."),
            Tok::Colon => write!(f, ":"),
            Tok::ColonEq => write!(f, ":="),
            Tok::Arrow => write!(f, "->"),
            Tok::DArrow => write!(f, "=>"),
            Tok::Bar => write!(f, "|"),
            Tok::Tilde => write!(f, "~"),
            Tok::Wedge => write!(f, "/\\"),
            Tok::Vee => write!(f, "\\/"),
            Tok::IffTok => write!(f, "<->"),
            Tok::EqTok => write!(f, "="),
            Tok::NeTok => write!(f, "<>"),
            Tok::InTok => write!(f, ":e"),
            Tok::NotinTok => write!(f, "/:e"),
            Tok::SubqTok => write!(f, "c="),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

impl std::error::Error for SyntaxError {}

pub fn err<T>(pos: Pos, message: impl Into<String>) -> Result<T, SyntaxError> {
    Err(SyntaxError { pos, message: message.into() })
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let mut line: u32 = 1;
    let mut col: u32 = 1;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if let Some(c) = c {
                if c == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
            }
            c
        }};
    }

    loop {
        // Skip whitespace and comments.
        loop {
            match chars.peek() {
                Some(c) if c.is_whitespace() => {
                    bump!();
                }
                Some('(') => {
                    // (* ... *) comments, nested.
                    let mut look = chars.clone();
                    look.next();
                    if look.peek() == Some(&'*') {
                        let start = Pos { line, col };
                        bump!();
                        bump!();
                        let mut depth = 1;
                        loop {
                            match bump!() {
                                Some('(') if chars.peek() == Some(&'*') => {
                                    bump!();
                                    depth += 1;
                                }
                                Some('*') if chars.peek() == Some(&')') => {
                                    bump!();
                                    depth -= 1;
                                    if depth == 0 {
                                        break;
                                    }
                                }
                                Some(_) => {}
                                None => return err(start, "unterminated comment"),
                            }
                        }
                    } else {
                        break;
                    }
                }
                _ => break,
            }
        }

        let pos = Pos { line, col };
        let Some(&c) = chars.peek() else {
            out.push((Tok::Eof, pos));
            return Ok(out);
        };

        let tok = match c {
            '(' => {
                bump!();
                Tok::LParen
            }
            ')' => {
                bump!();
                Tok::RParen
            }
            '{' => {
                bump!();
                Tok::LBrace
            }
            '}' => {
                bump!();
                Tok::RBrace
            }
            '[' => {
                bump!();
                Tok::LBracket
            }
            ']' => {
                bump!();
                Tok::RBracket
            }
            '@' => {
                bump!();
                if chars.peek() == Some(&'[') {
                    bump!();
                    Tok::AtBracket
                } else {
                    return err(pos, "expected `[` after `@`");
                }
            }
            ',' => {
                bump!();
                Tok::Comma
            }
            '.' => {
                bump!();
                Tok::Dot
            }
            '|' => {
                bump!();
                Tok::Bar
            }
            '~' | '¬' => {
                bump!();
                Tok::Tilde
            }
            '=' => {
                bump!();
                if chars.peek() == Some(&'>') {
                    bump!();
                    Tok::DArrow
                } else {
                    Tok::EqTok
                }
            }
            '<' => {
                bump!();
                match chars.peek() {
                    Some('-') => {
                        bump!();
                        if chars.peek() == Some(&'>') {
                            bump!();
                            Tok::IffTok
                        } else {
                            return err(pos, "expected `<->`");
                        }
                    }
                    Some('>') => {
                        bump!();
                        Tok::NeTok
                    }
                    _ => return err(pos, "expected `<->` or `<>`"),
                }
            }
            '-' => {
                bump!();
                if chars.peek() == Some(&'>') {
                    bump!();
                    Tok::Arrow
                } else {
                    return err(pos, "expected `->`");
                }
            }
            ':' => {
                bump!();
                match chars.peek() {
                    Some('=') => {
                        bump!();
                        Tok::ColonEq
                    }
                    Some('e') => {
                        // `:e` only when the `e` is not the start of an identifier.
                        let mut look = chars.clone();
                        look.next();
                        match look.peek() {
                            Some(&c2) if is_ident_char(c2) => Tok::Colon,
                            _ => {
                                bump!();
                                Tok::InTok
                            }
                        }
                    }
                    _ => Tok::Colon,
                }
            }
            '/' => {
                bump!();
                match chars.peek() {
                    Some('\\') => {
                        bump!();
                        Tok::Wedge
                    }
                    Some(':') => {
                        bump!();
                        if chars.peek() == Some(&'e') {
                            bump!();
                            Tok::NotinTok
                        } else {
                            return err(pos, "expected `/:e`");
                        }
                    }
                    _ => return err(pos, "expected `/\\` or `/:e`"),
                }
            }
            '\\' => {
                bump!();
                if chars.peek() == Some(&'/') {
                    bump!();
                    Tok::Vee
                } else {
                    return err(pos, "expected `\\/`");
                }
            }
            '∈' => {
                bump!();
                Tok::InTok
            }
            '∉' => {
                bump!();
                Tok::NotinTok
            }
            '⊆' => {
                bump!();
                Tok::SubqTok
            }
            '∧' => {
                bump!();
                Tok::Wedge
            }
            '∨' => {
                bump!();
                Tok::Vee
            }
            '↔' => {
                bump!();
                Tok::IffTok
            }
            '→' => {
                bump!();
                Tok::Arrow
            }
            '≠' => {
                bump!();
                Tok::NeTok
            }
            'λ' => {
                bump!();
                Tok::Ident("fun".into())
            }
            '∀' => {
                bump!();
                Tok::Ident("forall".into())
            }
            '∃' => {
                bump!();
                Tok::Ident("exists".into())
            }
            'ε' => {
                bump!();
                Tok::Ident("some".into())
            }
            c if is_ident_start(c) => {
                let mut s = String::new();
                while let Some(&c2) = chars.peek() {
                    if is_ident_char(c2) {
                        s.push(c2);
                        bump!();
                    } else {
                        break;
                    }
                }
                // `c=` is the subset operator when written without a space.
                if s == "c" && chars.peek() == Some(&'=') {
                    let mut look = chars.clone();
                    look.next();
                    if look.peek() != Some(&'>') {
                        bump!();
                        out.push((Tok::SubqTok, pos));
                        continue;
                    }
                }
                Tok::Ident(s)
            }
            other => return err(pos, format!("unexpected character `{other}`")),
        };
        out.push((tok, pos));
    }
}
