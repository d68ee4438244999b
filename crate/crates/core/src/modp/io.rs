use std::io::{BufRead, Read, Write};

use super::{ModPSeries, ModpError};

/// Header `p, r, N` as little-endian `u64`s, then `N + 1` residues.
pub fn write_binary(f: &ModPSeries, mut out: impl Write) -> Result<(), ModpError> {
    for h in [f.p(), f.r() as u64, f.degree() as u64] {
        out.write_all(&h.to_le_bytes())?;
    }
    for &c in f.coeffs() {
        out.write_all(&c.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary(mut input: impl Read) -> Result<ModPSeries, ModpError> {
    let mut word = [0u8; 8];
    let mut next = |input: &mut dyn Read| -> Result<u64, ModpError> {
        input.read_exact(&mut word)?;
        Ok(u64::from_le_bytes(word))
    };
    let p = next(&mut input)?;
    let r = u32::try_from(next(&mut input)?).map_err(|_| ModpError::Format("bad precision".into()))?;
    let n = next(&mut input)?;
    if !super::is_prime(p) || r > super::max_precision(p) {
        return Err(ModpError::Format(format!("bad header p = {p}, r = {r}")));
    }
    let m = p.pow(r);
    let coeffs = (0..=n)
        .map(|_| {
            let c = next(&mut input)?;
            if c >= m {
                return Err(ModpError::Format(format!("residue {c} out of range")));
            }
            Ok(c)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ModPSeries::new(p, r, coeffs))
}

/// `# p=<p> r=<r> N=<N>` followed by `degree:residue` lines for the support.
pub fn write_sparse_text(f: &ModPSeries, mut out: impl Write) -> Result<(), ModpError> {
    writeln!(out, "# p={} r={} N={}", f.p(), f.r(), f.degree())?;
    for i in f.support() {
        writeln!(out, "{}:{}", i, f.coeff(i))?;
    }
    Ok(())
}

pub fn read_sparse_text(input: impl BufRead) -> Result<ModPSeries, ModpError> {
    let bad = |m: String| ModpError::Format(m);
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| bad("empty input".into()))??;
    let mut fields = [None; 3];
    for part in header.trim_start_matches('#').split_whitespace() {
        let (k, v) = part.split_once('=').ok_or_else(|| bad(format!("bad header field `{part}`")))?;
        let v: u64 = v.parse().map_err(|_| bad(format!("bad number `{v}`")))?;
        match k {
            "p" => fields[0] = Some(v),
            "r" => fields[1] = Some(v),
            "N" => fields[2] = Some(v),
            _ => return Err(bad(format!("unknown header field `{k}`"))),
        }
    }
    let [Some(p), Some(r), Some(n)] = fields else {
        return Err(bad("header needs p, r and N".into()));
    };
    let r = r as u32;
    if !super::is_prime(p) || r > super::max_precision(p) {
        return Err(bad(format!("bad header p = {p}, r = {r}")));
    }
    let mut coeffs = vec![0u64; n as usize + 1];
    for line in lines {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (d, c) = line.split_once(':').ok_or_else(|| bad(format!("bad line `{line}`")))?;
        let d: usize = d.parse().map_err(|_| bad(format!("bad degree `{d}`")))?;
        let c: u64 = c.parse().map_err(|_| bad(format!("bad residue `{c}`")))?;
        if d > n as usize || c >= p.pow(r) {
            return Err(bad(format!("entry `{line}` out of range")));
        }
        coeffs[d] = c;
    }
    Ok(ModPSeries::new(p, r, coeffs))
}
