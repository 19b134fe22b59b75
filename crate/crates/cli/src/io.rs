use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use anyhow::{Context, Result};
use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;
use num_bigint::BigInt;

use urb_core::IntegerSet;

use crate::Failure;

const GZIP_MAGIC: [u8; 2] = [0x1f, 0x8b];

/// Reads a file as text, inflating it first if it is gzip data.
pub fn read_input(path: &Path) -> Result<String, Failure> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let mut text = String::new();
    if bytes.starts_with(&GZIP_MAGIC) {
        GzDecoder::new(&bytes[..])
            .read_to_string(&mut text)
            .with_context(|| format!("inflating {}", path.display()))?;
    } else {
        text = String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))?;
    }
    Ok(text)
}

pub fn write_output(path: &Path, data: &[u8], gzip: bool) -> Result<()> {
    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    if gzip {
        let mut enc = GzEncoder::new(file, Compression::default());
        enc.write_all(data)?;
        enc.finish()?;
    } else {
        let mut file = file;
        file.write_all(data)?;
        file.write_all(b"\n")?;
    }
    Ok(())
}

/// A JSON array of decimal strings, or integers separated by whitespace or
/// commas.
pub fn parse_set(text: &str) -> Result<IntegerSet, Failure> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        let raw: Vec<String> = serde_json::from_str(trimmed).map_err(|e| Failure::Usage(format!("bad set: {e}")))?;
        return tokens(raw.iter().map(String::as_str));
    }
    tokens(trimmed.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()))
}

fn tokens<'a>(it: impl Iterator<Item = &'a str>) -> Result<IntegerSet, Failure> {
    let values = it
        .map(|t| t.parse::<BigInt>().map_err(|_| Failure::Usage(format!("not an integer: {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let n = values.len();
    let set = IntegerSet::from_unsorted(values);
    if set.len() != n {
        return Err(Failure::Usage("set has repeated elements".into()));
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_formats() {
        let expected: IntegerSet = [-3i64, 1, 7].into_iter().collect();
        assert!(matches!(parse_set(r#"["-3","1","7"]"#), Ok(s) if s == expected));
        assert!(matches!(parse_set("7 -3\n1"), Ok(s) if s == expected));
        assert!(matches!(parse_set("1, 7, -3"), Ok(s) if s == expected));
        assert!(matches!(parse_set("1 1"), Err(Failure::Usage(_))));
        assert!(matches!(parse_set("1 x"), Err(Failure::Usage(_))));
    }
}
