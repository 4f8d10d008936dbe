use super::records::{
    by_mid, char_record, parse_char, Quintuple, Tagged, Triple, TAG_LEN, UNKNOWN,
};
use super::{
    check_machine, copy_sort_merge, triples_on, with_registers, RoundTrace, Rows, RwError, RwRun,
    Stage, A, Q, T,
};
use crate::ceil_log2;
use crate::model_vm::{merge_sort_tape, Direction, Machine, TapeId};

/// Recovers `s` from `BWT(s)` on the input tape (sentinel as the empty
/// record). The output tape receives `s` one character per record.
///
/// The second component of each triple becomes the position of its first
/// character in `s`: the sentinel starts at `n + 1`, and a round with span
/// `d` resolves a character from a known one `d` positions further on.
pub fn rw_bwt_invert(m: &mut Machine) -> Result<RwRun<Vec<u32>>, RwError> {
    check_machine(m)?;
    let total = tag(m)?;
    merge_sort_tape(
        m,
        A,
        [TapeId::Work(3), TapeId::Work(4), TapeId::Work(5), T],
        |p, q| p.cmp(q),
    )?;
    let mut unknown = seed(m, total)?;
    let initial = if m.trace_enabled() {
        Some(Stage {
            name: "triples",
            rows: Rows::Triples(triples_on(m, T)?),
        })
    } else {
        None
    };

    let max_rounds = ceil_log2(u64::from(total)) as usize;
    let mut trace = Vec::new();
    let mut rounds = 0;
    while unknown > 0 {
        if rounds == max_rounds {
            return Err(RwError::NotBwtImage(format!(
                "{unknown} positions unresolved after {rounds} rounds"
            )));
        }
        rounds += 1;
        let span = 1u32 << (rounds - 1);
        let mut stages = Vec::new();
        copy_sort_merge(m, &mut stages)?;
        let left = shrink(m, span)?;
        if left == unknown {
            return Err(RwError::NotBwtImage(format!(
                "round {rounds} resolved no positions"
            )));
        }
        unknown = left;
        if m.trace_enabled() {
            stages.push(Stage {
                name: "shrink",
                rows: Rows::Triples(triples_on(m, T)?),
            });
            trace.push(RoundTrace {
                round: rounds,
                stages,
            });
        }
    }

    merge_sort_tape(m, T, [A, Q, TapeId::Work(3), TapeId::Work(4)], by_mid)?;
    let mut out = Vec::with_capacity(total as usize - 1);
    with_registers(m, 32 + 8 * 16, |m| {
        let mut src = m.begin_pass(T, Direction::Forward)?;
        let mut expected = 1u32;
        while let Some(r) = m.read(&mut src) {
            let t = Triple::from_bytes(&r);
            if t.mid != expected {
                return Err(RwError::NotBwtImage(format!(
                    "positions are not a permutation (found {} where {expected} belongs)",
                    t.mid
                )));
            }
            expected += 1;
            if let Some(c) = t.left.ch() {
                m.emit(char_record(Some(c)));
                out.push(c);
            }
        }
        m.end_pass(src)?;
        Ok(())
    })?;
    Ok(RwRun {
        output: out,
        rounds,
        initial,
        trace,
    })
}

/// Tags `BWT(s)` by position onto two tapes: `Q` keeps position order,
/// `A` is sorted next into the stable sort. Returns `n + 1`.
fn tag(m: &mut Machine) -> Result<u32, RwError> {
    with_registers(m, 32 + 32 + 8 * TAG_LEN as u64, |m| {
        let mut src = m.begin_pass(TapeId::Input, Direction::Forward)?;
        let mut by_position = m.begin_write(Q)?;
        let mut to_sort = m.begin_write(A)?;
        let mut id = 0u32;
        let mut sentinels = 0;
        while let Some(r) = m.read(&mut src) {
            let c = parse_char(&r)?;
            sentinels += u32::from(c.is_none());
            id += 1;
            let t = Tagged::new(c, id)?;
            let mut rec = Vec::with_capacity(TAG_LEN);
            rec.extend_from_slice(&t.code.to_be_bytes());
            rec.extend_from_slice(&t.id.to_be_bytes());
            m.write(&mut by_position, rec.clone())?;
            m.write(&mut to_sort, rec)?;
        }
        m.end_pass(src)?;
        m.end_pass(by_position)?;
        m.end_pass(to_sort)?;
        if sentinels != 1 {
            return Err(RwError::NotBwtImage(format!("{sentinels} sentinels")));
        }
        Ok(id)
    })
}

fn read_tag(r: &[u8]) -> Tagged {
    Tagged {
        code: u16::from_be_bytes([r[0], r[1]]),
        id: u32::from_be_bytes([r[2], r[3], r[4], r[5]]),
    }
}

/// Zips the stable sort (on `A`) with `BWT(s)` (on `Q`) into triples on
/// `T`, seeding the sentinel with `n + 1`. Returns the number of unknowns.
fn seed(m: &mut Machine, total: u32) -> Result<u32, RwError> {
    with_registers(m, 32 + 8 * (2 * TAG_LEN + 16) as u64, |m| {
        let mut sorted = m.begin_pass(A, Direction::Forward)?;
        let mut bwt = m.begin_pass(Q, Direction::Forward)?;
        let mut out = m.begin_write(T)?;
        let mut unknown = 0;
        while let (Some(f), Some(l)) = (m.read(&mut sorted), m.read(&mut bwt)) {
            let left = read_tag(&f);
            let mid = if left.is_sentinel() { total } else { UNKNOWN };
            unknown += u32::from(mid == UNKNOWN);
            m.write(
                &mut out,
                Triple {
                    left,
                    mid,
                    right: read_tag(&l),
                }
                .to_bytes(),
            )?;
        }
        m.end_pass(sorted)?;
        m.end_pass(bwt)?;
        m.end_pass(out)?;
        Ok(unknown)
    })
}

/// Drops the middle of each quintuple, filling an unknown second component
/// from a known fourth. Returns the number of unknowns left.
fn shrink(m: &mut Machine, span: u32) -> Result<u32, RwError> {
    with_registers(m, 32 + 32 + 8 * (26 + 16), |m| {
        let mut src = m.begin_pass(Q, Direction::Forward)?;
        let mut out = m.begin_write(T)?;
        let mut unknown = 0;
        while let Some(r) = m.read(&mut src) {
            let q = Quintuple::from_bytes(&r);
            let mid = if q.x != UNKNOWN {
                q.x
            } else if q.y != UNKNOWN {
                q.y.checked_sub(span).filter(|&x| x >= 1).ok_or_else(|| {
                    RwError::NotBwtImage(format!("position {} has no predecessor at {span}", q.y))
                })?
            } else {
                UNKNOWN
            };
            unknown += u32::from(mid == UNKNOWN);
            m.write(
                &mut out,
                Triple {
                    left: q.a,
                    mid,
                    right: q.c,
                }
                .to_bytes(),
            )?;
        }
        m.end_pass(src)?;
        m.end_pass(out)?;
        Ok(unknown)
    })
}
