use crate::syntax::Span;

use super::diag::Diagnostic;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Zero,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LAngle,
    RAngle,
    SubtypeOf,
    Comma,
    Dot,
    Colon,
    Eq,
    Bang,
    Query,
    Plus,
    /// `(+)`
    OPlus,
    /// `||`
    Par,
    /// `+{`
    Internal,
    /// `&{`
    External,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Zero => "`0`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LAngle => "`<`".into(),
            Tok::RAngle => "`>`".into(),
            Tok::SubtypeOf => "`<:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Query => "`?`".into(),
            Tok::Plus => "`+`".into(),
            Tok::OPlus => "`(+)`".into(),
            Tok::Par => "`||`".into(),
            Tok::Internal => "`+{`".into(),
            Tok::External => "`&{`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

pub fn lex(src: &str) -> Result<Vec<(Tok, Span)>, Diagnostic> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            i += 1;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), Span::new(start, i)));
            continue;
        }
        let rest = &bytes[i..];
        let (tok, len) = if rest.starts_with(b"(+)") {
            (Tok::OPlus, 3)
        } else if rest.starts_with(b"||") {
            (Tok::Par, 2)
        } else if rest.starts_with(b"<:") {
            (Tok::SubtypeOf, 2)
        } else if rest.starts_with(b"+{") {
            (Tok::Internal, 2)
        } else if rest.starts_with(b"&{") {
            (Tok::External, 2)
        } else {
            let t = match c {
                b'0' => Tok::Zero,
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'{' => Tok::LBrace,
                b'}' => Tok::RBrace,
                b'<' => Tok::LAngle,
                b'>' => Tok::RAngle,
                b',' => Tok::Comma,
                b'.' => Tok::Dot,
                b':' => Tok::Colon,
                b'=' => Tok::Eq,
                b'!' => Tok::Bang,
                b'?' => Tok::Query,
                b'+' => Tok::Plus,
                _ => {
                    let ch = src[i..].chars().next().unwrap_or('?');
                    return Err(Diagnostic::error(
                        "syntax",
                        format!("unexpected character `{ch}`"),
                        Span::new(i, i + ch.len_utf8()),
                    ));
                }
            };
            (t, 1)
        };
        i += len;
        out.push((tok, Span::new(start, i)));
    }
    out.push((Tok::Eof, Span::new(src.len(), src.len())));
    Ok(out)
}
