//! On-disk representation of a product basis: JSON with every complex entry
//! as an `[re, im]` pair. serde_json emits shortest-round-trip decimal text,
//! so values survive a write/read cycle bit-exactly.

use serde::{Deserialize, Serialize};
use upb_core::basis::verify_pb;
use upb_core::{CVec, Complex, ProductBasis, Tolerance};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Serialize, Deserialize)]
pub struct BasisDocument {
    pub format_version: String,
    pub dims: Vec<usize>,
    /// states[state][party][entry] = [re, im]
    pub states: Vec<Vec<Vec<[f64; 2]>>>,
}

impl BasisDocument {
    pub fn from_basis(pb: &ProductBasis) -> Self {
        BasisDocument {
            format_version: FORMAT_VERSION.to_string(),
            dims: pb.dims().to_vec(),
            states: pb
                .states()
                .iter()
                .map(|s| {
                    s.locals()
                        .iter()
                        .map(|l| l.entries().iter().map(|z| [z.re, z.im]).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_basis(&self, tol: Tolerance) -> Result<ProductBasis, String> {
        if self.format_version != FORMAT_VERSION {
            return Err(format!(
                "unsupported format_version {:?} (expected {FORMAT_VERSION:?})",
                self.format_version
            ));
        }
        let raw: Vec<Vec<CVec>> = self
            .states
            .iter()
            .map(|s| {
                s.iter()
                    .map(|l| {
                        CVec::new(l.iter().map(|&[re, im]| Complex::new(re, im)).collect())
                    })
                    .collect()
            })
            .collect();
        verify_pb(&self.dims, &raw, tol).map_err(|e| e.to_string())
    }

    pub fn save(&self, path: &std::path::Path) -> Result<(), String> {
        let text = serde_json::to_string_pretty(self).map_err(|e| e.to_string())?;
        std::fs::write(path, text).map_err(|e| format!("writing {}: {e}", path.display()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("reading {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("parsing {}: {e}", path.display()))
    }
}
