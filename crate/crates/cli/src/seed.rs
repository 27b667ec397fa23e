//! Seed selection for the transform command.

use std::path::Path;

use num_bigint::BigInt;
use tmtower::{BitSource, Builtin, Word};

use crate::output::parse_bfile;

/// A built-in sequence or a word read from disk.
#[derive(Debug, Clone)]
pub enum Seed {
    Builtin(Builtin),
    Word(Word),
}

impl BitSource for Seed {
    fn bit(&self, n: u64) -> Option<u8> {
        match self {
            Seed::Builtin(b) => b.bit(n),
            Seed::Word(w) => w.bit(n),
        }
    }

    fn len(&self) -> Option<u64> {
        match self {
            Seed::Builtin(_) => None,
            Seed::Word(w) => BitSource::len(w),
        }
    }
}

/// `tm`, `ftm`, `m2` or `level:<m>`.
pub fn parse_builtin(name: &str) -> Result<Builtin, String> {
    match name {
        "tm" => Ok(Builtin::Tower(0)),
        "ftm" => Ok(Builtin::Ftm),
        "m2" => Ok(Builtin::M2),
        other => {
            let m = other
                .strip_prefix("level:")
                .ok_or_else(|| format!("unknown seed {other:?}; expected tm, ftm, m2 or level:<m>"))?;
            let m: u64 = m.parse().map_err(|_| format!("bad level in {other:?}"))?;
            tmtower::Level::new(m).map_err(|e| e.to_string())?;
            Ok(Builtin::Tower(m))
        }
    }
}

/// A b-file must start at index 0 and hold only 0/1 values; anything else is
/// read as a 0/1 word with whitespace ignored.
pub fn parse_seed_text(text: &str) -> Result<Word, String> {
    let looks_like_bfile = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.split_whitespace().count() == 2);
    if !looks_like_bfile {
        return Word::parse(text).map_err(|e| e.to_string());
    }
    let (offset, values) = parse_bfile(text).map_err(|e| e.to_string())?;
    if offset != 0 {
        return Err(format!("b-file seed must start at index 0, starts at {offset}"));
    }
    let (zero, one) = (BigInt::from(0), BigInt::from(1));
    values
        .iter()
        .enumerate()
        .map(|(i, v)| match v {
            v if *v == zero => Ok(0),
            v if *v == one => Ok(1),
            v => Err(format!("seed value {v} at index {i} is not a bit")),
        })
        .collect()
}

pub fn load_seed_file(path: &Path) -> Result<Word, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_seed_text(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins() {
        assert_eq!(parse_builtin("tm").unwrap(), Builtin::Tower(0));
        assert_eq!(parse_builtin("level:5").unwrap(), Builtin::Tower(5));
        assert_eq!(parse_builtin("ftm").unwrap(), Builtin::Ftm);
        assert!(parse_builtin("level:40").is_err());
        assert!(parse_builtin("fib").is_err());
    }

    #[test]
    fn seed_text_layouts() {
        assert_eq!(parse_seed_text("0110\n1001\n").unwrap().to_bit_string(), "01101001");
        assert_eq!(parse_seed_text("0 0\n1 1\n2 1\n").unwrap().to_bit_string(), "011");
        assert!(parse_seed_text("0 0\n1 2\n").is_err());
        assert!(parse_seed_text("1 0\n2 1\n").is_err());
        assert!(parse_seed_text("01a").is_err());
    }
}
