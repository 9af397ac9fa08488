//! C text for recipe programs and scalar fallback helpers.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::isa::{map_type, ElemClass, ElementType, NeonVectorType, RvvVectorType, VlenConfig};
use crate::neon::{ArgKind, Family, NeonIntrinsicId, RetKind};
use crate::rvv::{InputKind, Opcode, Operand, ResultKind, RvvOp, RvvProgram, Step, ValueId};

/// Name of the generic vector typedef used for types that do not map.
pub fn generic_name(t: NeonVectorType) -> String {
    format!("neon2rvv_{t}")
}

pub fn generic_typedef(t: NeonVectorType) -> String {
    format!(
        "typedef {} {} __attribute__((__vector_size__({})));",
        t.elem().c_scalar(),
        generic_name(t),
        t.total_bits() / 8
    )
}

pub fn fixed_typedef(ty: RvvVectorType) -> String {
    format!(
        "typedef {ty} {} __attribute__((riscv_rvv_vector_bits(__riscv_v_fixed_vlen)));",
        ty.fixed_name()
    )
}

/// Declared type for a NEON vector type at `cfg`.
pub fn vector_decl(t: NeonVectorType, cfg: &VlenConfig) -> String {
    match map_type(t, cfg).rvv() {
        Some(rvv) => rvv.fixed_name(),
        None => generic_name(t),
    }
}

fn param_decl(id: NeonIntrinsicId, kind: &ArgKind, cfg: &VlenConfig) -> String {
    match kind {
        ArgKind::Vector(t) => vector_decl(*t, cfg),
        ArgKind::Scalar(e) => e.c_scalar().to_string(),
        ArgKind::Address(t) if id.family == Family::Ld1 => format!("const {} *", t.elem().c_scalar()),
        ArgKind::Address(t) => format!("{} *", t.elem().c_scalar()),
        ArgKind::Immediate { .. } => "int".to_string(),
    }
}

fn ret_decl(ret: RetKind, cfg: &VlenConfig) -> String {
    match ret {
        RetKind::Vector(t) => vector_decl(t, cfg),
        RetKind::Scalar(e) => e.c_scalar().to_string(),
        RetKind::Unit => "void".to_string(),
    }
}

fn join_params(params: &[(String, String)]) -> String {
    params
        .iter()
        .map(|(ty, name)| {
            if ty.ends_with('*') {
                format!("{ty}{name}")
            } else {
                format!("{ty} {name}")
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// All-ones prints as `-1`; bitwise masks print in hex, counts in decimal.
fn render_imm(x: u64, opcode: Opcode, ty: RvvVectorType) -> String {
    let bitwise = matches!(opcode, Opcode::VandVX | Opcode::VorVX | Opcode::VxorVX);
    if x == ty.elem().lane_mask() && x > 9 {
        "-1".to_string()
    } else if bitwise && x > 9 {
        format!("{x:#x}")
    } else {
        x.to_string()
    }
}

pub fn op_callee(op: &RvvOp, ty_of: &dyn Fn(ValueId) -> Option<RvvVectorType>) -> String {
    let src = match op.operands.first() {
        Some(Operand::Value(v)) => ty_of(*v),
        _ => None,
    };
    op.opcode.intrinsic_name(op.ty, src)
}

/// One `__riscv_*` call for `op`, naming values through `name`.
pub fn render_op_call(op: &RvvOp, name: &dyn Fn(ValueId) -> String, ty_of: &dyn Fn(ValueId) -> Option<RvvVectorType>) -> String {
    let operand = |o: &Operand| match o {
        Operand::Value(v) => name(*v),
        Operand::Imm(x) => render_imm(*x, op.opcode, op.ty),
    };
    let callee = op_callee(op, ty_of);
    let mut args: Vec<String> = Vec::new();
    if op.opcode == Opcode::VslideupVX {
        args.extend(op.prior.map(name));
    }
    args.extend(op.operands.iter().map(operand));
    if !matches!(op.opcode, Opcode::VmvXS | Opcode::Vreinterpret) {
        args.push(op.vl.to_string());
    }
    format!("{callee}({})", args.join(", "))
}

/// A `static inline` function whose body is the program, one statement per
/// op. Parameters are the program inputs in order.
pub fn composite_helper(helper: &str, id: NeonIntrinsicId, program: &RvvProgram, cfg: &VlenConfig) -> String {
    let sig = id.signature();
    let runtime: Vec<&ArgKind> = sig.args.iter().filter(|a| !matches!(a, ArgKind::Immediate { .. })).collect();
    let params: Vec<(String, String)> = program
        .inputs
        .iter()
        .zip(&runtime)
        .map(|(input, kind)| (param_decl(id, kind, cfg), input.name.clone()))
        .collect();

    let mut names: HashMap<ValueId, String> = HashMap::new();
    let mut types: HashMap<ValueId, RvvVectorType> = HashMap::new();
    for input in &program.inputs {
        names.insert(input.id, input.name.clone());
        if let InputKind::Vector { ty, .. } = input.kind {
            types.insert(input.id, ty);
        }
    }
    let mut body = String::new();
    for step in &program.steps {
        let Step::Vector(op) = step else { continue };
        let call = render_op_call(op, &|v| names[&v].clone(), &|v| types.get(&v).copied());
        match op.dest {
            Some(d) => {
                let local = format!("v{}", d.0);
                let decl = match op.opcode.result_kind() {
                    ResultKind::Mask => op.ty.mask_type_name(),
                    ResultKind::Scalar => op.ty.elem().c_scalar().to_string(),
                    _ => op.ty.to_string(),
                };
                let _ = writeln!(body, "    {decl} {local} = {call};");
                names.insert(d, local);
                types.insert(d, op.ty);
            }
            None => {
                let _ = writeln!(body, "    {call};");
            }
        }
    }
    if let Some(out) = program.outputs.first() {
        let _ = writeln!(body, "    return {};", names[out]);
    }
    format!(
        "static inline {} {helper}({}) {{\n{body}}}\n",
        ret_decl(sig.ret, cfg),
        join_params(&params)
    )
}

fn wide_unsigned(e: ElementType) -> &'static str {
    if e.bit_width() <= 32 {
        "uint32_t"
    } else {
        "uint64_t"
    }
}

/// Per-lane statement for the scalar fallback loop, over arrays named
/// `<input>_` and the result array `r_`.
fn lane_statement(id: NeonIntrinsicId, names: &[String], imm: Option<i64>) -> String {
    let e = id.elem;
    let t = e.c_scalar();
    let w = wide_unsigned(e);
    let a = names.first().map(|n| format!("{n}_[i]")).unwrap_or_default();
    let b = names.get(1).map(|n| format!("{n}_[i]")).unwrap_or_default();
    let n = imm.unwrap_or(0);
    let float = e.is_float();
    let expr = match id.family {
        Family::Add | Family::Sub | Family::Mul => {
            let op = match id.family {
                Family::Add => "+",
                Family::Sub => "-",
                _ => "*",
            };
            if float {
                format!("{a} {op} {b}")
            } else {
                format!("({t})(({w}){a} {op} ({w}){b})")
            }
        }
        Family::Neg if float => format!("-{a}"),
        Family::Neg => format!("({t})(0 - ({w}){a})"),
        Family::Min | Family::Max => {
            let lt = if id.family == Family::Min { "<" } else { ">" };
            if float {
                let sign = if id.family == Family::Min { "" } else { "!" };
                format!(
                    "({a} != {a} || {b} != {b}) ? {a} + {b} : ({a} {lt} {b} || ({a} == {b} && {sign}__builtin_signbit({a}))) ? {a} : {b}"
                )
            } else {
                format!("{a} {lt} {b} ? {a} : {b}")
            }
        }
        Family::And => format!("{a} & {b}"),
        Family::Orr => format!("{a} | {b}"),
        Family::Eor => format!("{a} ^ {b}"),
        Family::Mvn => format!("({t})~{a}"),
        Family::Bic => format!("{a} & ({t})~{b}"),
        Family::ShlN => format!("({t})(({w}){a} << {n})"),
        Family::ShrN if e.class() == ElemClass::SignedInt => {
            format!("{a} >> {}", n.min(e.bit_width() as i64 - 1))
        }
        Family::ShrN if n == e.bit_width() as i64 => "0".to_string(),
        Family::ShrN => format!("{a} >> {n}"),
        Family::Ceq | Family::Cgt | Family::Cge | Family::Clt | Family::Cle => {
            let op = match id.family {
                Family::Ceq => "==",
                Family::Cgt => ">",
                Family::Cge => ">=",
                Family::Clt => "<",
                _ => "<=",
            };
            let r = e.as_unsigned().c_scalar();
            format!("({a} {op} {b}) ? ({r})-1 : 0")
        }
        Family::GetHigh => format!("{}_[i + {}]", names[0], id.vector_type().lanes() / 2),
        Family::GetLow => a,
        Family::Combine => {
            let half = id.vector_type().lanes() / 2;
            format!("i < {half} ? {}_[i] : {}_[i - {half}]", names[0], names[1])
        }
        Family::DupN => names[0].clone(),
        Family::Ld1 => format!("{}[i]", names[0]),
        Family::St1 => return format!("{}[i] = {}_[i];", names[0], names[1]),
        Family::SetLane => format!("i == {n} ? {} : {}_[i]", names[0], names[1]),
        Family::Rbit => format!("({t})__builtin_bitreverse8((uint8_t){a})"),
        Family::GetLane => unreachable!("get_lane has no loop"),
    };
    format!("r_[i] = {expr};")
}

/// Scalar-loop helper: spill vector operands to arrays, compute each lane,
/// reload the result.
pub fn fallback_helper(helper: &str, id: NeonIntrinsicId, input_names: &[String], imm: Option<i64>, cfg: &VlenConfig) -> String {
    let sig = id.signature();
    let runtime: Vec<&ArgKind> = sig.args.iter().filter(|a| !matches!(a, ArgKind::Immediate { .. })).collect();
    let params: Vec<(String, String)> = runtime
        .iter()
        .zip(input_names)
        .map(|(kind, name)| (param_decl(id, kind, cfg), name.clone()))
        .collect();
    let mut body = String::new();
    for (kind, name) in runtime.iter().zip(input_names) {
        if let ArgKind::Vector(t) = kind {
            let _ = writeln!(body, "    {} {name}_[{}];", t.elem().c_scalar(), t.lanes());
            let _ = writeln!(body, "    {}", spill(*t, name, cfg));
        }
    }
    match sig.ret {
        RetKind::Scalar(_) => {
            let v = &input_names[0];
            let _ = writeln!(body, "    return {v}_[{}];", imm.unwrap_or(0));
        }
        RetKind::Unit => {
            let lanes = id.vector_type().lanes();
            let _ = writeln!(body, "    for (int i = 0; i < {lanes}; i++)");
            let _ = writeln!(body, "        {}", lane_statement(id, input_names, imm));
        }
        RetKind::Vector(t) => {
            let _ = writeln!(body, "    {} r_[{}];", t.elem().c_scalar(), t.lanes());
            let _ = writeln!(body, "    for (int i = 0; i < {}; i++)", t.lanes());
            let _ = writeln!(body, "        {}", lane_statement(id, input_names, imm));
            body.push_str(&reload(t, cfg));
        }
    }
    format!(
        "static inline {} {helper}({}) {{\n{body}}}\n",
        ret_decl(sig.ret, cfg),
        join_params(&params)
    )
}

fn spill(t: NeonVectorType, name: &str, cfg: &VlenConfig) -> String {
    match map_type(t, cfg).rvv() {
        Some(rvv) => format!(
            "{}({name}_, {name}, {});",
            Opcode::Vse.intrinsic_name(rvv, None),
            t.lanes()
        ),
        None => format!("memcpy({name}_, &{name}, sizeof {name}_);"),
    }
}

fn reload(t: NeonVectorType, cfg: &VlenConfig) -> String {
    match map_type(t, cfg).rvv() {
        Some(rvv) => format!(
            "    return {}(r_, {});\n",
            Opcode::Vle.intrinsic_name(rvv, None),
            t.lanes()
        ),
        None => format!(
            "    {} r;\n    memcpy(&r, r_, sizeof r_);\n    return r;\n",
            generic_name(t)
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recipe::{instantiate, lookup, Binding};

    fn cfg(vlen: u32) -> VlenConfig {
        VlenConfig::new(vlen, true).unwrap()
    }

    #[test]
    fn ceq_helper_text() {
        let id = NeonIntrinsicId::parse("vceqq_s32").unwrap();
        let p = instantiate(&lookup(id, &cfg(128)).unwrap(), &cfg(128), &[Binding::Operand; 2]).unwrap();
        let text = composite_helper("neon2rvv_vceqq_s32", id, &p, &cfg(128));
        let want = "\
static inline fixed_vuint32m1_t neon2rvv_vceqq_s32(fixed_vint32m1_t a, fixed_vint32m1_t b) {
    vuint32m1_t v2 = __riscv_vmv_v_x_u32m1(0, 4);
    vbool32_t v3 = __riscv_vmseq_vv_i32m1_b32(a, b, 4);
    vuint32m1_t v4 = __riscv_vmerge_vxm_u32m1(v2, -1, v3, 4);
    return v4;
}
";
        assert_eq!(text, want);
    }

    #[test]
    fn combine_passes_destination_first() {
        let id = NeonIntrinsicId::parse("vcombine_s32").unwrap();
        let p = instantiate(&lookup(id, &cfg(128)).unwrap(), &cfg(128), &[Binding::Operand; 2]).unwrap();
        let text = composite_helper("h", id, &p, &cfg(128));
        assert!(text.contains("__riscv_vslideup_vx_i32m1(low, high, 2, 4)"), "{text}");
    }

    #[test]
    fn fallback_text_uses_generic_types_when_unmapped() {
        let id = NeonIntrinsicId::parse("vaddq_s32").unwrap();
        let text = fallback_helper("f", id, &["a".into(), "b".into()], None, &cfg(64));
        assert!(text.starts_with("static inline neon2rvv_int32x4_t f(neon2rvv_int32x4_t a, neon2rvv_int32x4_t b)"));
        assert!(text.contains("r_[i] = (int32_t)((uint32_t)a_[i] + (uint32_t)b_[i]);"));
        assert_eq!(generic_typedef("int32x4_t".parse().unwrap()), "typedef int32_t neon2rvv_int32x4_t __attribute__((__vector_size__(16)));");
    }

    #[test]
    fn typedef_form() {
        assert_eq!(
            fixed_typedef(RvvVectorType::of(ElementType::I32)),
            "typedef vint32m1_t fixed_vint32m1_t __attribute__((riscv_rvv_vector_bits(__riscv_v_fixed_vlen)));"
        );
    }
}
