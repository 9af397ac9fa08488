use std::ops::Range;

use crate::isa::{ElementType, NeonVectorType};
use crate::neon::{classify_name, CallName};

use super::lexer::{Token, TokenKind};

/// What a NEON type token denotes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeUse {
    Vector(NeonVectorType),
    /// `float32_t` and friends, which `arm_neon.h` defines.
    Scalar(ElementType),
    /// Poly, bfloat, or multi-vector types (`int32x4x2_t`).
    Unsupported(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeUseSite {
    pub ty: TypeUse,
    pub span: Range<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntrinsicCallSite {
    pub name: String,
    pub callee: CallName,
    pub callee_span: Range<usize>,
    /// Whole call expression, callee through closing parenthesis. Equals
    /// `callee_span` when the name is not called.
    pub span: Range<usize>,
    /// Trimmed argument spans; `None` when the name is not followed by `(`
    /// or the parentheses are unbalanced.
    pub args: Option<Vec<Range<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncludeSite {
    pub header: String,
    /// The directive line without its newline.
    pub span: Range<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Site {
    Type(TypeUseSite),
    Call(IntrinsicCallSite),
    Include(IncludeSite),
}

impl Site {
    pub fn span(&self) -> Range<usize> {
        match self {
            Site::Type(t) => t.span.clone(),
            Site::Call(c) => c.span.clone(),
            Site::Include(i) => i.span.clone(),
        }
    }
}

const NEON_HEADERS: &[&str] = &["arm_neon.h", "simde/arm/neon.h"];

fn classify_type(name: &str) -> Option<TypeUse> {
    match name {
        "float16_t" => return Some(TypeUse::Scalar(ElementType::F16)),
        "float32_t" => return Some(TypeUse::Scalar(ElementType::F32)),
        "float64_t" => return Some(TypeUse::Scalar(ElementType::F64)),
        _ => {}
    }
    if let Ok(t) = name.parse::<NeonVectorType>() {
        return Some(TypeUse::Vector(t));
    }
    // Anything else shaped like `<stem><bits>x<lanes>[x<n>]_t` is NEON but
    // out of scope.
    let body = name.strip_suffix("_t")?;
    let stem_end = body.find(|c: char| c.is_ascii_digit())?;
    let stem = &body[..stem_end];
    if !matches!(stem, "int" | "uint" | "float" | "poly" | "bfloat" | "mfloat") {
        return None;
    }
    let mut parts = body[stem_end..].split('x');
    let bits = parts.next()?;
    let lanes: Vec<&str> = parts.collect();
    let numeric = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let shaped = numeric(bits) && (1..=2).contains(&lanes.len()) && lanes.iter().all(|s| numeric(s));
    shaped.then(|| TypeUse::Unsupported(name.to_string()))
}

fn next_code(tokens: &[Token], from: usize) -> Option<usize> {
    (from..tokens.len()).find(|&i| !tokens[i].is_trivia())
}

/// Splits a parenthesized argument list starting at `open`. Returns the
/// trimmed argument spans and the index of the closing parenthesis.
fn split_args(text: &str, tokens: &[Token], open: usize) -> Option<(Vec<Range<usize>>, usize)> {
    let mut depth = 0usize;
    let mut args = Vec::new();
    let mut arg_start: Option<usize> = None;
    let mut arg_end = 0;
    for (i, tok) in tokens.iter().enumerate().skip(open) {
        let t = &text[tok.span.clone()];
        if tok.kind == TokenKind::Punct {
            match t {
                "(" | "[" | "{" => {
                    depth += 1;
                    if depth == 1 {
                        continue;
                    }
                }
                ")" | "]" | "}" => {
                    depth = depth.checked_sub(1)?;
                    if depth == 0 {
                        if t != ")" {
                            return None;
                        }
                        match arg_start {
                            Some(s) => args.push(s..arg_end),
                            // A trailing comma leaves an empty argument.
                            None if !args.is_empty() => return None,
                            None => {}
                        }
                        return Some((args, i));
                    }
                }
                "," if depth == 1 => {
                    args.push(arg_start.take()?..arg_end);
                    continue;
                }
                _ => {}
            }
        }
        if !tok.is_trivia() {
            arg_start.get_or_insert(tok.span.start);
            arg_end = tok.span.end;
        }
    }
    None
}

/// Finds NEON type uses, intrinsic calls, and NEON header includes in
/// code tokens. Comments and literals are never inspected.
pub fn scan_tokens(text: &str, tokens: &[Token]) -> Vec<Site> {
    let mut sites = Vec::new();
    let mut line_start = true;
    for (i, tok) in tokens.iter().enumerate() {
        let t = &text[tok.span.clone()];
        match tok.kind {
            TokenKind::Newline => {
                line_start = true;
                continue;
            }
            TokenKind::Space | TokenKind::Comment => continue,
            TokenKind::Punct if t == "#" && line_start => {
                if let Some(site) = include_site(text, tokens, i) {
                    sites.push(Site::Include(site));
                }
            }
            TokenKind::Ident => {
                if let Some(ty) = classify_type(t) {
                    sites.push(Site::Type(TypeUseSite { ty, span: tok.span.clone() }));
                } else if let Some(callee) = classify_name(t) {
                    let mut site = IntrinsicCallSite {
                        name: t.to_string(),
                        callee,
                        callee_span: tok.span.clone(),
                        span: tok.span.clone(),
                        args: None,
                    };
                    if let Some(open) = next_code(tokens, i + 1).filter(|&j| &text[tokens[j].span.clone()] == "(") {
                        if let Some((args, close)) = split_args(text, tokens, open) {
                            site.span = tok.span.start..tokens[close].span.end;
                            site.args = Some(args);
                        }
                    }
                    sites.push(Site::Call(site));
                }
            }
            _ => {}
        }
        line_start = false;
    }
    sites
}

fn include_site(text: &str, tokens: &[Token], hash: usize) -> Option<IncludeSite> {
    let kw = next_code(tokens, hash + 1)?;
    if &text[tokens[kw].span.clone()] != "include" {
        return None;
    }
    let first = next_code(tokens, kw + 1)?;
    // The directive runs to the first newline token, so a block comment
    // opened on the line is kept whole.
    let line_end = tokens[hash..]
        .iter()
        .take_while(|t| t.kind != TokenKind::Newline)
        .last()
        .map_or(tokens[hash].span.end, |t| t.span.end);
    let tok = &tokens[first];
    let header = match tok.kind {
        TokenKind::Str => text[tok.span.start + 1..tok.span.end - 1].to_string(),
        TokenKind::Punct if &text[tok.span.clone()] == "<" => {
            let close = text[tok.span.end..line_end].find(['>', '\n'])?;
            if text[tok.span.end + close..].starts_with('\n') {
                return None;
            }
            text[tok.span.end..tok.span.end + close].to_string()
        }
        _ => return None,
    };
    if !NEON_HEADERS.contains(&header.as_str()) {
        return None;
    }
    Some(IncludeSite {
        header,
        span: tokens[hash].span.start..line_end,
    })
}
