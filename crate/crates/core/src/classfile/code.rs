//! Bytecode walking: finds every instruction that carries a constant-pool
//! operand naming a type or member.

use super::opcodes::*;
use super::reader::Reader;
use super::ClassFileError;

/// A constant-pool operand found in code, resolved once the bootstrap
/// table is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Operand {
    /// get/put field, invoke* (except invokedynamic).
    Member(u16),
    /// new, anewarray, checkcast, instanceof, multianewarray, catch types.
    Class(u16),
    /// ldc / ldc_w / ldc2_w.
    Constant(u16),
    InvokeDynamic(u16),
}

/// Total encoded length of fixed-size instructions. Unassigned opcodes are
/// treated as one byte; verification is out of scope.
fn fixed_length(op: u8) -> usize {
    match op {
        0x10 | 0x12 | 0x15..=0x19 | 0x36..=0x3a | 0xa9 | 0xbc => 2,
        0x11
        | 0x13
        | 0x14
        | 0x84
        | 0x99..=0xa8
        | 0xb2..=0xb8
        | 0xbb
        | 0xbd
        | 0xc0
        | 0xc1
        | 0xc6
        | 0xc7 => 3,
        0xc5 => 4,
        0xb9 | 0xba | 0xc8 | 0xc9 => 5,
        _ => 1,
    }
}

/// Walks `code` (a reader over exactly the code bytes) and returns the
/// operands in instruction order.
pub(crate) fn walk(mut code: Reader<'_>) -> Result<Vec<Operand>, ClassFileError> {
    let start = code.pos();
    let mut out = Vec::new();
    while code.remaining() > 0 {
        let insn_pos = code.pos();
        let op = code.u8()?;
        match op {
            LDC => out.push(Operand::Constant(code.u8()? as u16)),
            LDC_W | LDC2_W => out.push(Operand::Constant(code.u16()?)),
            GETSTATIC..=INVOKESTATIC => out.push(Operand::Member(code.u16()?)),
            INVOKEINTERFACE => {
                out.push(Operand::Member(code.u16()?));
                code.skip(2)?;
            }
            INVOKEDYNAMIC => {
                out.push(Operand::InvokeDynamic(code.u16()?));
                code.skip(2)?;
            }
            NEW | ANEWARRAY | CHECKCAST | INSTANCEOF => out.push(Operand::Class(code.u16()?)),
            MULTIANEWARRAY => {
                out.push(Operand::Class(code.u16()?));
                code.skip(1)?;
            }
            TABLESWITCH | LOOKUPSWITCH => {
                let rel = insn_pos - start + 1;
                code.skip((4 - rel % 4) % 4)?;
                let _default = code.i32()?;
                let entries = if op == TABLESWITCH {
                    let low = code.i32()? as i64;
                    let high = code.i32()? as i64;
                    (high - low + 1).max(0) as usize * 4
                } else {
                    code.i32()?.max(0) as usize * 8
                };
                code.skip(entries)?;
            }
            WIDE => {
                let inner = code.u8()?;
                code.skip(if inner == IINC { 4 } else { 2 })?;
            }
            other => code.skip(fixed_length(other) - 1)?,
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walks_switch_padding() {
        // iconst_0; tableswitch (pad 2) default=0 low=0 high=1 [0,0]; invokestatic #7
        let mut code = vec![0x03, TABLESWITCH, 0, 0];
        code.extend_from_slice(&0i32.to_be_bytes());
        code.extend_from_slice(&0i32.to_be_bytes());
        code.extend_from_slice(&1i32.to_be_bytes());
        code.extend_from_slice(&[0; 8]);
        code.extend_from_slice(&[INVOKESTATIC, 0, 7]);
        let ops = walk(Reader::new(&code)).unwrap();
        assert_eq!(ops, vec![Operand::Member(7)]);
    }

    #[test]
    fn lookupswitch_and_wide() {
        // nop; lookupswitch (pad 2) default npairs=1 [k,off]; wide iinc; wide iload; new #3
        let mut code = vec![0x00, LOOKUPSWITCH, 0, 0];
        code.extend_from_slice(&0i32.to_be_bytes());
        code.extend_from_slice(&1i32.to_be_bytes());
        code.extend_from_slice(&[0; 8]);
        code.extend_from_slice(&[WIDE, IINC, 0, 1, 0, 1, WIDE, 0x15, 0, 1, NEW, 0, 3]);
        assert_eq!(walk(Reader::new(&code)).unwrap(), vec![Operand::Class(3)]);
    }

    #[test]
    fn instruction_past_end_is_truncated() {
        let code = [0x00, INVOKEVIRTUAL, 0];
        assert!(matches!(
            walk(Reader::new(&code)),
            Err(ClassFileError::Truncated { .. })
        ));
    }
}
