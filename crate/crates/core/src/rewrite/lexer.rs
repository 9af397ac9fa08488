use std::ops::Range;

use super::RewriteError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Number,
    Str,
    Char,
    Comment,
    Space,
    Newline,
    Punct,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Range<usize>,
}

impl Token {
    pub fn is_trivia(&self) -> bool {
        matches!(self.kind, TokenKind::Comment | TokenKind::Space | TokenKind::Newline)
    }
}

/// Byte offsets of line starts, for 1-based line/column reporting.
#[derive(Clone, Debug)]
pub struct LineIndex {
    starts: Vec<usize>,
}

impl LineIndex {
    pub fn new(text: &str) -> Self {
        let mut starts = vec![0];
        starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        LineIndex { starts }
    }

    pub fn position(&self, text: &str, offset: usize) -> (usize, usize) {
        let line = self.starts.partition_point(|&s| s <= offset) - 1;
        let col = text[self.starts[line]..offset].chars().count() + 1;
        (line + 1, col)
    }
}

/// Splits C source into tokens. Comments and literals are single tokens so
/// nothing inside them is mistaken for code. Concatenating the token spans
/// reproduces the input exactly.
pub fn lex(text: &str) -> Result<Vec<Token>, RewriteError> {
    let bytes = text.as_bytes();
    let lines = LineIndex::new(text);
    let fail = |at: usize, what: &str| {
        let (line, col) = lines.position(text, at);
        RewriteError::Lex {
            line,
            col,
            message: what.to_string(),
        }
    };
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        let c = bytes[i];
        let kind = match c {
            b'\n' => {
                i += 1;
                TokenKind::Newline
            }
            b' ' | b'\t' | b'\r' | 0x0b | 0x0c => {
                while i < bytes.len() && matches!(bytes[i], b' ' | b'\t' | b'\r' | 0x0b | 0x0c) {
                    i += 1;
                }
                TokenKind::Space
            }
            b'/' if bytes.get(i + 1) == Some(&b'/') => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    // A backslash-newline continues a line comment.
                    if bytes[i] == b'\\' && bytes.get(i + 1) == Some(&b'\n') {
                        i += 1;
                    }
                    i += 1;
                }
                TokenKind::Comment
            }
            b'/' if bytes.get(i + 1) == Some(&b'*') => {
                match text[i + 2..].find("*/") {
                    Some(end) => i += 2 + end + 2,
                    None => return Err(fail(start, "unterminated block comment")),
                }
                TokenKind::Comment
            }
            b'"' | b'\'' => {
                i += 1;
                loop {
                    match bytes.get(i) {
                        None | Some(b'\n') => {
                            let what = if c == b'"' { "unterminated string literal" } else { "unterminated character literal" };
                            return Err(fail(start, what));
                        }
                        Some(b'\\') => i += 2,
                        Some(&q) if q == c => {
                            i += 1;
                            break;
                        }
                        Some(_) => i += 1,
                    }
                }
                if c == b'"' { TokenKind::Str } else { TokenKind::Char }
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                TokenKind::Ident
            }
            c if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) => {
                i += 1;
                while i < bytes.len() {
                    let d = bytes[i];
                    let exponent_sign = matches!(d, b'+' | b'-') && matches!(bytes[i - 1], b'e' | b'E' | b'p' | b'P');
                    if !(exponent_sign || d.is_ascii_alphanumeric() || d == b'_' || d == b'.') {
                        break;
                    }
                    i += 1;
                }
                TokenKind::Number
            }
            _ => {
                // One code point, however many bytes.
                i += text[i..].chars().next().map_or(1, char::len_utf8);
                TokenKind::Punct
            }
        };
        tokens.push(Token { kind, span: start..i });
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<(TokenKind, &str)> {
        lex(text).unwrap().into_iter().map(|t| (t.kind, &text[t.span])).collect()
    }

    #[test]
    fn spans_cover_input() {
        let text = "int32x4_t v = vaddq_s32(a, b); // vaddq_s32\n/* x */ \"s\\\"q\" 'c' 1.5e-3f é";
        let joined: String = lex(text).unwrap().iter().map(|t| &text[t.span.clone()]).collect();
        assert_eq!(joined, text);
    }

    #[test]
    fn literals_and_comments_are_single_tokens() {
        let k = kinds("a /* vaddq_s32(a) */ \"vaddq_s32\" x");
        assert_eq!(k[2], (TokenKind::Comment, "/* vaddq_s32(a) */"));
        assert_eq!(k[4], (TokenKind::Str, "\"vaddq_s32\""));
        assert_eq!(kinds("0x1fu")[0], (TokenKind::Number, "0x1fu"));
    }

    #[test]
    fn unterminated_constructs_fail_with_position() {
        assert_eq!(
            lex("int x;\n  /* open"),
            Err(RewriteError::Lex { line: 2, col: 3, message: "unterminated block comment".into() })
        );
        assert!(matches!(lex("\"abc\nd\""), Err(RewriteError::Lex { line: 1, col: 1, .. })));
        assert!(lex("'a").is_err());
    }
}
