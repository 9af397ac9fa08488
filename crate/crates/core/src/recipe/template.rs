//! Op-line patterns and their parser.

use std::fmt;

use crate::rvv::Opcode;

use super::RecipeError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImmPattern {
    Lit(u64),
    /// All ones at the op's element width.
    Ones,
    /// Half the intrinsic's lane count.
    Half,
    /// The intrinsic's immediate argument.
    Imm,
    /// The immediate clamped to `sew - 1`.
    ImmClamp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OperandPattern {
    Named(String),
    Imm(ImmPattern),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpPattern {
    pub dest: Option<String>,
    pub opcode: Opcode,
    /// Run on the unsigned type of the intrinsic's element width.
    pub unsigned: bool,
    pub operands: Vec<OperandPattern>,
    /// `vl` is half the lane count instead of the full count.
    pub half_vl: bool,
    pub tail: Option<String>,
}

impl OpPattern {
    pub fn parse(line: &str) -> Result<OpPattern, RecipeError> {
        let bad = |why: &str| RecipeError::Database(format!("`{line}`: {why}"));
        let (dest, rest) = match line.split_once(" = ") {
            Some((d, r)) => {
                let d = d.trim();
                if d.is_empty() || !d.chars().all(is_ident_char) {
                    return Err(bad("malformed destination"));
                }
                (Some(d.to_string()), r)
            }
            None => (None, line),
        };
        let mut words = rest.split_whitespace();
        let head = words.next().ok_or_else(|| bad("missing opcode"))?;
        let (name, unsigned) = match head.strip_suffix(".u") {
            Some(n) => (n, true),
            None => (head, false),
        };
        let opcode = Opcode::from_name(name).ok_or_else(|| bad("unknown opcode"))?;
        let mut pattern = OpPattern {
            dest,
            opcode,
            unsigned,
            operands: Vec::new(),
            half_vl: false,
            tail: None,
        };
        for word in words {
            if let Some(v) = word.strip_prefix("vl=") {
                if v != "half" {
                    return Err(bad("vl must be `half` when given"));
                }
                pattern.half_vl = true;
            } else if let Some(t) = word.strip_prefix("tail=") {
                pattern.tail = Some(t.to_string());
            } else if let Some(imm) = word.strip_prefix('#') {
                pattern.operands.push(OperandPattern::Imm(parse_imm(imm).ok_or_else(|| bad("bad immediate"))?));
            } else if word.chars().all(is_ident_char) {
                pattern.operands.push(OperandPattern::Named(word.to_string()));
            } else {
                return Err(bad("unexpected token"));
            }
        }
        Ok(pattern)
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn parse_imm(text: &str) -> Option<ImmPattern> {
    Some(match text {
        "ones" => ImmPattern::Ones,
        "half" => ImmPattern::Half,
        "imm" => ImmPattern::Imm,
        "imm_clamp" => ImmPattern::ImmClamp,
        _ => ImmPattern::Lit(match text.strip_prefix("0x") {
            Some(hex) => u64::from_str_radix(hex, 16).ok()?,
            None => text.parse().ok()?,
        }),
    })
}

impl fmt::Display for ImmPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImmPattern::Lit(x) if *x > 9 => write!(f, "#{x:#x}"),
            ImmPattern::Lit(x) => write!(f, "#{x}"),
            ImmPattern::Ones => f.write_str("#ones"),
            ImmPattern::Half => f.write_str("#half"),
            ImmPattern::Imm => f.write_str("#imm"),
            ImmPattern::ImmClamp => f.write_str("#imm_clamp"),
        }
    }
}

impl fmt::Display for OpPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(d) = &self.dest {
            write!(f, "{d} = ")?;
        }
        f.write_str(self.opcode.name())?;
        if self.unsigned {
            f.write_str(".u")?;
        }
        for o in &self.operands {
            match o {
                OperandPattern::Named(n) => write!(f, " {n}")?,
                OperandPattern::Imm(i) => write!(f, " {i}")?,
            }
        }
        if self.half_vl {
            f.write_str(" vl=half")?;
        }
        if let Some(t) = &self.tail {
            write!(f, " tail={t}")?;
        }
        Ok(())
    }
}

/// The masked shift-or bit reversal cascade for `elem_bits`-wide lanes,
/// reading `a` and defining `out`. Stage `k` computes
/// `((v >> k) & m) | ((v & m) << k)` as five ops on the unsigned type.
pub fn rbit_cascade(elem_bits: u32) -> Result<Vec<OpPattern>, RecipeError> {
    if elem_bits != 8 {
        return Err(RecipeError::UnsupportedWidth(elem_bits));
    }
    const MASKS: [(u64, u64); 3] = [(1, 0x55), (2, 0x33), (4, 0x0f)];
    let mut lines = Vec::new();
    let mut v = "a".to_string();
    for (i, (k, m)) in MASKS.into_iter().enumerate() {
        let next = if i + 1 == MASKS.len() { "out".to_string() } else { format!("v{k}") };
        lines.push(format!("hi{k} = vsrl_vx.u {v} #{k}"));
        lines.push(format!("hm{k} = vand_vx.u hi{k} #{m:#x}"));
        lines.push(format!("lm{k} = vand_vx.u {v} #{m:#x}"));
        lines.push(format!("lo{k} = vsll_vx.u lm{k} #{k}"));
        lines.push(format!("{next} = vor_vv.u hm{k} lo{k}"));
        v = next;
    }
    lines.iter().map(|l| OpPattern::parse(l)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trips() {
        for line in [
            "zero = vmv_v_x.u #0",
            "out = vmerge_vxm.u zero #ones m",
            "vse ptr a",
            "out = vmv_v_v a vl=half",
            "out = vslideup_vx high #half tail=low",
            "hm1 = vand_vx.u hi1 #0x55",
        ] {
            assert_eq!(OpPattern::parse(line).unwrap().to_string(), line);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(OpPattern::parse("out = vbogus a").is_err());
        assert!(OpPattern::parse("out = vadd_vv a #zz").is_err());
        assert!(OpPattern::parse("out = vadd_vv a vl=4").is_err());
        assert!(OpPattern::parse("").is_err());
    }

    #[test]
    fn cascade_shape() {
        let ops = rbit_cascade(8).unwrap();
        assert_eq!(ops.len(), 15);
        let names: Vec<_> = ops.iter().take(5).map(|o| o.opcode.name()).collect();
        assert_eq!(names, ["vsrl_vx", "vand_vx", "vand_vx", "vsll_vx", "vor_vv"]);
        assert_eq!(ops.last().unwrap().dest.as_deref(), Some("out"));
        assert_eq!(rbit_cascade(16), Err(RecipeError::UnsupportedWidth(16)));
    }
}
