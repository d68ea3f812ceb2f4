//! Numeric arguments in decimal, `0x` hex or `0b` binary.

use num_bigint::BigUint;
use num_traits::Num;

pub fn parse_big(text: &str) -> Result<BigUint, String> {
    let t = text.trim().replace('_', "");
    let (digits, radix) = if let Some(h) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        (h, 16)
    } else if let Some(b) = t.strip_prefix("0b").or_else(|| t.strip_prefix("0B")) {
        (b, 2)
    } else {
        (t.as_str(), 10)
    };
    if digits.is_empty() {
        return Err(format!("{text:?} is not a number"));
    }
    BigUint::from_str_radix(digits, radix).map_err(|_| format!("{text:?} is not a number"))
}

pub fn parse_u64(text: &str) -> Result<u64, String> {
    u64::try_from(parse_big(text)?).map_err(|_| format!("{text} is too large"))
}

pub fn parse_u32(text: &str) -> Result<u32, String> {
    u32::try_from(parse_big(text)?).map_err(|_| format!("{text} is too large"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radixes() {
        assert_eq!(parse_u64("78").unwrap(), 78);
        assert_eq!(parse_u64("0x4e").unwrap(), 78);
        assert_eq!(parse_u64("0b1001110").unwrap(), 78);
        assert_eq!(parse_u64("1_000").unwrap(), 1000);
        assert!(parse_u64("0x").is_err());
        assert!(parse_u64("-3").is_err());
        assert!(parse_u64("12a").is_err());
        assert!(parse_u32("0x100000000").is_err());
        assert_eq!(parse_big("0b1").unwrap(), BigUint::from(1u32));
    }
}
