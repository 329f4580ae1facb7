//! Text format for families.
//!
//! ```text
//! n=4
//! {}
//! 1
//! 1,3
//! 0x0c
//! ```
//!
//! The first content line is `n=<int>`; each later non-empty line is one set,
//! either a comma-separated element list, `{}` for the empty set, or a `0x`
//! hex mask. Lines starting with `#` are comments. The canonical form written
//! by [`format_family`] lists sets as ascending element lists, sorted by mask.

use std::fmt::Write;

use super::family::Family;
use super::mask::{SetMask, Universe};
use crate::error::{Error, Result};

pub fn parse_family(text: &str) -> Result<Family> {
    let mut universe: Option<Universe> = None;
    let mut masks = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let Some(u) = universe else {
            let value = line
                .strip_prefix("n=")
                .ok_or_else(|| err(format!("expected `n=<int>` header, found `{line}`")))?;
            let n: u32 = value
                .trim()
                .parse()
                .map_err(|_| err(format!("bad universe size `{value}`")))?;
            universe = Some(Universe::new(n).map_err(|e| err(e.to_string()))?);
            continue;
        };
        masks.push(parse_set(u, line).map_err(err)?);
    }
    let u = universe.ok_or(Error::Parse { line: 0, msg: "missing `n=<int>` header".into() })?;
    Family::new(u, masks)
}

fn parse_set(u: Universe, line: &str) -> std::result::Result<SetMask, String> {
    if let Some(hex) = line.strip_prefix("0x").or_else(|| line.strip_prefix("0X")) {
        let bits = u64::from_str_radix(hex, 16).map_err(|_| format!("bad hex mask `{line}`"))?;
        return u.check(SetMask(bits)).map_err(|e| e.to_string());
    }
    let body = line
        .strip_prefix('{')
        .and_then(|l| l.strip_suffix('}'))
        .unwrap_or(line)
        .trim();
    if body.is_empty() {
        return Ok(SetMask::EMPTY);
    }
    let mut mask = SetMask::EMPTY;
    for tok in body.split(',') {
        let tok = tok.trim();
        let e: u32 = tok.parse().map_err(|_| format!("bad element `{tok}`"))?;
        if e == 0 || e > u.n() {
            return Err(format!("element {e} outside 1..={}", u.n()));
        }
        if mask.contains(e) {
            return Err(format!("element {e} repeated"));
        }
        mask = mask.with(e);
    }
    Ok(mask)
}

pub fn format_family(f: &Family) -> String {
    let mut out = String::with_capacity(8 + f.len() * 8);
    let _ = writeln!(out, "n={}", f.universe().n());
    for m in f.iter() {
        if m.is_empty() {
            out.push_str("{}");
        } else {
            for (i, e) in m.elements().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{e}");
            }
        }
        out.push('\n');
    }
    out
}
