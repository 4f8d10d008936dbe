use std::cmp::Ordering;

use super::records::{
    by_context, by_suffix, char_record, middle_key, parse_char, Quintuple, Tagged, Triple,
    QUINTUPLE_LEN,
};
use super::{
    check_machine, copy_sort_merge, quintuples_on, triples_on, with_registers, RoundTrace, Rows,
    RwError, RwRun, Stage, A, Q, T,
};
use crate::model_vm::{merge_sort_tape, Direction, Machine, TapeId};
use crate::transforms::SentinelString;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Order {
    /// Quintuples by fourth, third, second component: backward contexts.
    Context,
    /// By second, third, fourth: forward suffixes.
    Suffix,
}

/// Computes the BWT of the string on the input tape.
///
/// The output tape receives one record per symbol of the result, the
/// sentinel as the empty record.
pub fn rw_bwt_encode(m: &mut Machine) -> Result<RwRun<SentinelString<u32>>, RwError> {
    let (rounds, initial, trace) = doubling(m, Order::Context)?;
    let mut symbols = Vec::new();
    with_registers(m, 8 * 16, |m| {
        let mut src = m.begin_pass(T, Direction::Forward)?;
        while let Some(r) = m.read(&mut src) {
            let c = Triple::from_bytes(&r).right.ch();
            m.emit(char_record(c));
            symbols.push(c);
        }
        m.end_pass(src)?;
        Ok(())
    })?;
    let output =
        SentinelString::from_options(symbols).map_err(|e| RwError::InvalidInput(e.to_string()))?;
    Ok(RwRun {
        output,
        rounds,
        initial,
        trace,
    })
}

/// Suffix array of `s·#` (0-based, the sentinel at index `n` being the
/// least suffix), emitted as 4-byte big-endian positions.
pub fn rw_suffix_array(m: &mut Machine) -> Result<RwRun<Vec<usize>>, RwError> {
    let (rounds, initial, trace) = doubling(m, Order::Suffix)?;
    let total = m.tape(T)?.len() as u32;
    let mut sa = Vec::new();
    with_registers(m, 8 * 16 + 32, |m| {
        let mut src = m.begin_pass(T, Direction::Forward)?;
        while let Some(r) = m.read(&mut src) {
            let start = Triple::from_bytes(&r).left.id % total;
            m.emit(start.to_be_bytes().to_vec());
            sa.push(start as usize);
        }
        m.end_pass(src)?;
        Ok(())
    })?;
    Ok(RwRun {
        output: sa,
        rounds,
        initial,
        trace,
    })
}

type Doubled = (usize, Option<Stage>, Vec<RoundTrace>);

fn doubling(m: &mut Machine, order: Order) -> Result<Doubled, RwError> {
    check_machine(m)?;
    let total = tag(m)?;
    let initial = if m.trace_enabled() {
        Some(Stage {
            name: "triples",
            rows: Rows::Triples(triples_on(m, T)?),
        })
    } else {
        None
    };
    let mut trace = Vec::new();
    let mut rounds = 0;
    let mut last_mid = 1;
    while last_mid < total {
        rounds += 1;
        let mut stages = Vec::new();
        copy_sort_merge(m, &mut stages)?;
        let cmp: fn(&[u8], &[u8]) -> Ordering = match order {
            Order::Context => by_context,
            Order::Suffix => by_suffix,
        };
        merge_sort_tape(m, Q, [T, A, TapeId::Work(3), TapeId::Work(4)], cmp)?;
        if m.trace_enabled() {
            stages.push(Stage {
                name: "sort",
                rows: Rows::Quintuples(quintuples_on(m, Q)?),
            });
        }
        last_mid = renumber(m)?;
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
    Ok((rounds, initial, trace))
}

/// Tags each input character with its 1-based position and writes the
/// initial triples `(s_i, 1, s_{i+1})`, the sentinel closing the cycle.
/// Returns `n + 1`.
fn tag(m: &mut Machine) -> Result<u32, RwError> {
    with_registers(m, 2 * 48 + 32, |m| {
        let mut src = m.begin_pass(TapeId::Input, Direction::Forward)?;
        let mut out = m.begin_write(T)?;
        let mut first: Option<Tagged> = None;
        let mut prev: Option<Tagged> = None;
        let mut id = 0u32;
        while let Some(r) = m.read(&mut src) {
            let c = parse_char(&r)?
                .ok_or_else(|| RwError::InvalidInput("sentinel inside the input".into()))?;
            id += 1;
            let t = Tagged::new(Some(c), id)?;
            match prev {
                Some(p) => m.write(
                    &mut out,
                    Triple {
                        left: p,
                        mid: 1,
                        right: t,
                    }
                    .to_bytes(),
                )?,
                None => first = Some(t),
            }
            prev = Some(t);
        }
        let sentinel = Tagged::new(None, id + 1)?;
        if let Some(p) = prev {
            m.write(
                &mut out,
                Triple {
                    left: p,
                    mid: 1,
                    right: sentinel,
                }
                .to_bytes(),
            )?;
        }
        let after = first.unwrap_or(sentinel);
        m.write(
            &mut out,
            Triple {
                left: sentinel,
                mid: 1,
                right: after,
            }
            .to_bytes(),
        )?;
        m.end_pass(src)?;
        m.end_pass(out)?;
        Ok(id + 1)
    })
}

/// Replaces each sorted quintuple's middle by its rank among distinct
/// middles. Returns the largest rank assigned.
fn renumber(m: &mut Machine) -> Result<u32, RwError> {
    with_registers(m, 80 + 32 + 8 * QUINTUPLE_LEN as u64, |m| {
        let mut src = m.begin_pass(Q, Direction::Forward)?;
        let mut out = m.begin_write(T)?;
        let mut prev = None;
        let mut rank = 0u32;
        while let Some(r) = m.read(&mut src) {
            let q = Quintuple::from_bytes(&r);
            let key = middle_key(&q);
            if prev != Some(key) {
                rank += 1;
                prev = Some(key);
            }
            m.write(
                &mut out,
                Triple {
                    left: q.a,
                    mid: rank,
                    right: q.c,
                }
                .to_bytes(),
            )?;
        }
        m.end_pass(src)?;
        m.end_pass(out)?;
        Ok(rank)
    })
}
