//! Reference circuits used by the self-test and the CLI examples.

pub const HALF_ADDER: &str = "\
# sum and carry of two bits
in a b
s = XOR a b
c = AND a b
out s c
";

/// `bits`-wide ripple-carry adder. Inputs `a0.. b0..` little-endian, outputs
/// `s0..` then the carry out.
pub fn ripple_adder(bits: usize) -> String {
    assert!(bits > 0, "adder needs at least one bit");
    let names = |p: &str| (0..bits).map(|i| format!("{p}{i}")).collect::<Vec<_>>().join(" ");
    let mut text = format!("in {} {}\nzero = CONST 0\n", names("a"), names("b"));
    for i in 0..bits {
        let cin = if i == 0 { "zero".to_owned() } else { format!("c{}", i - 1) };
        text += &format!(
            "p{i} = XOR a{i} b{i}\ns{i} = XOR p{i} {cin}\ng{i} = AND a{i} b{i}\nh{i} = AND p{i} {cin}\nc{i} = XOR g{i} h{i}\n"
        );
    }
    text + &format!("out {} c{}\n", names("s"), bits - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delegation::{evaluate_plain, BooleanCircuit};

    #[test]
    fn samples_parse_and_add() {
        assert_eq!(BooleanCircuit::parse(HALF_ADDER).unwrap().nand_count(), 0);
        for width in 1..=3 {
            let c = BooleanCircuit::parse(&ripple_adder(width)).unwrap();
            for x in 0..1u32 << (2 * width) {
                let bits: Vec<u8> = (0..2 * width).map(|i| ((x >> i) & 1) as u8).collect();
                let out = evaluate_plain(&c, &bits).unwrap();
                let value = |v: &[u8]| v.iter().rev().fold(0u32, |acc, &b| 2 * acc + u32::from(b));
                assert_eq!(value(&out), value(&bits[..width]) + value(&bits[width..]));
            }
        }
    }
}
