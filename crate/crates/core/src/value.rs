use std::fmt;

use serde::Serialize;

use crate::isa::{ElementType, NeonVectorType};

/// Bit-exact lane contents of a vector. Lane `i` lives in the low
/// `elem.bit_width()` bits of `bits[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorValue {
    elem: ElementType,
    bits: Vec<u64>,
}

impl VectorValue {
    /// Builds a value, truncating every lane to the element width.
    pub fn new(elem: ElementType, bits: impl IntoIterator<Item = u64>) -> Self {
        let mask = elem.lane_mask();
        VectorValue {
            elem,
            bits: bits.into_iter().map(|b| b & mask).collect(),
        }
    }

    pub fn zeroed(ty: NeonVectorType) -> Self {
        VectorValue::new(ty.elem(), vec![0; ty.lanes()])
    }

    pub fn from_i64s(elem: ElementType, lanes: &[i64]) -> Self {
        VectorValue::new(elem, lanes.iter().map(|&v| v as u64))
    }

    pub fn from_f32s(lanes: &[f32]) -> Self {
        VectorValue::new(ElementType::F32, lanes.iter().map(|v| v.to_bits() as u64))
    }

    pub fn from_f64s(lanes: &[f64]) -> Self {
        VectorValue::new(ElementType::F64, lanes.iter().map(|v| v.to_bits()))
    }

    pub fn elem(&self) -> ElementType {
        self.elem
    }

    pub fn lanes(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[u64] {
        &self.bits
    }

    pub fn lane(&self, i: usize) -> u64 {
        self.bits[i]
    }

    pub fn set_lane(&mut self, i: usize, v: u64) {
        self.bits[i] = v & self.elem.lane_mask();
    }

    /// Lane `i` sign-extended according to the element class.
    pub fn lane_i64(&self, i: usize) -> i64 {
        sign_extend(self.bits[i], self.elem.bit_width())
    }

    /// The NEON type of this value, if the lane count forms a legal one.
    pub fn neon_type(&self) -> Option<NeonVectorType> {
        NeonVectorType::new(self.elem, self.bits.len()).ok()
    }

    /// Little-endian in-memory image.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        let n = self.elem.bytes();
        self.bits
            .iter()
            .flat_map(|b| b.to_le_bytes().into_iter().take(n))
            .collect()
    }

    pub fn from_le_bytes(elem: ElementType, bytes: &[u8]) -> Self {
        let n = elem.bytes();
        VectorValue::new(
            elem,
            bytes.chunks_exact(n).map(|chunk| {
                let mut buf = [0u8; 8];
                buf[..n].copy_from_slice(chunk);
                u64::from_le_bytes(buf)
            }),
        )
    }

    /// Replaces every NaN lane with the canonical quiet NaN of its width.
    pub fn canonicalize_nans(&self) -> VectorValue {
        VectorValue {
            elem: self.elem,
            bits: self
                .bits
                .iter()
                .map(|&b| canonicalize_nan(self.elem, b))
                .collect(),
        }
    }
}

impl fmt::Display for VectorValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.elem.bit_width() as usize / 4;
        write!(f, "{}[", self.elem)?;
        for (i, b) in self.bits.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "0x{b:0digits$x}")?;
        }
        f.write_str("]")
    }
}

impl Serialize for VectorValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn sign_extend(bits: u64, width: u32) -> i64 {
    if width == 64 {
        bits as i64
    } else {
        let shift = 64 - width;
        ((bits << shift) as i64) >> shift
    }
}

pub fn is_nan_bits(elem: ElementType, bits: u64) -> bool {
    match elem {
        ElementType::F16 => (bits & 0x7c00) == 0x7c00 && (bits & 0x03ff) != 0,
        ElementType::F32 => f32::from_bits(bits as u32).is_nan(),
        ElementType::F64 => f64::from_bits(bits).is_nan(),
        _ => false,
    }
}

pub fn canonical_nan(elem: ElementType) -> u64 {
    match elem {
        ElementType::F16 => 0x7e00,
        ElementType::F32 => 0x7fc0_0000,
        ElementType::F64 => 0x7ff8_0000_0000_0000,
        _ => 0,
    }
}

pub fn canonicalize_nan(elem: ElementType, bits: u64) -> u64 {
    if is_nan_bits(elem, bits) {
        canonical_nan(elem)
    } else {
        bits
    }
}
