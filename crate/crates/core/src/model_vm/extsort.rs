//! Balanced two-way external merge sort over Read-Write tapes.

use std::cmp::Ordering;

use super::{Direction, Machine, MachineError, PassHandle, TapeId};
use crate::ceil_log2;

/// Stably sorts the records on `tape` using four scratch tapes.
///
/// One distribution pass splits the tape into single-record runs; each of
/// the ⌈log2 r⌉ merge levels then doubles the run length, the last level
/// writing back to `tape`. Two records and three counters are charged as
/// working memory.
pub fn merge_sort_tape<F>(
    machine: &mut Machine,
    tape: TapeId,
    scratch: [TapeId; 4],
    cmp: F,
) -> Result<(), MachineError>
where
    F: Fn(&[u8], &[u8]) -> Ordering,
{
    let records = machine.tape(tape)?.len();
    if records <= 1 {
        return Ok(());
    }
    let counter_bits = 3 * u64::from(ceil_log2(records as u64 + 1));
    machine.charge_memory(counter_bits)?;

    let [s0, s1, s2, s3] = scratch;
    {
        let mut src = machine.begin_pass(tape, Direction::Forward)?;
        let mut outs = [machine.begin_write(s0)?, machine.begin_write(s1)?];
        let mut i = 0;
        while let Some(r) = machine.read(&mut src) {
            machine.write(&mut outs[i & 1], r)?;
            i += 1;
        }
        machine.end_pass(src)?;
        let [a, b] = outs;
        machine.end_pass(a)?;
        machine.end_pass(b)?;
    }

    let (mut ins, mut outs) = ([s0, s1], [s2, s3]);
    let mut run = 1usize;
    loop {
        let last = 2 * run >= records;
        let mut a = machine.begin_pass(ins[0], Direction::Forward)?;
        let mut b = machine.begin_pass(ins[1], Direction::Forward)?;
        let mut targets = if last {
            vec![machine.begin_write(tape)?]
        } else {
            vec![machine.begin_write(outs[0])?, machine.begin_write(outs[1])?]
        };
        let fan = targets.len();
        let mut j = 0;
        loop {
            let written = merge_runs(machine, &mut a, &mut b, run, &mut targets[j % fan], &cmp)?;
            if written == 0 {
                break;
            }
            j += 1;
        }
        machine.end_pass(a)?;
        machine.end_pass(b)?;
        for t in targets {
            machine.end_pass(t)?;
        }
        if last {
            break;
        }
        std::mem::swap(&mut ins, &mut outs);
        run *= 2;
    }
    machine.release_memory(counter_bits)
}

/// Merges the next run of up to `run` records from each input into `out`.
fn merge_runs<F>(
    machine: &mut Machine,
    a: &mut PassHandle,
    b: &mut PassHandle,
    run: usize,
    out: &mut PassHandle,
    cmp: &F,
) -> Result<usize, MachineError>
where
    F: Fn(&[u8], &[u8]) -> Ordering,
{
    let mut left_a = run;
    let mut left_b = run;
    let mut head_a = pull(machine, a, &mut left_a)?;
    let mut head_b = pull(machine, b, &mut left_b)?;
    let mut written = 0;
    loop {
        let take_a = match (&head_a, &head_b) {
            (None, None) => break,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (Some(x), Some(y)) => cmp(x, y) != Ordering::Greater,
        };
        let record =
            if take_a { head_a.take() } else { head_b.take() }.expect("chosen head holds a record");
        machine.release_memory(8 * record.len() as u64)?;
        machine.write(out, record)?;
        if take_a {
            head_a = pull(machine, a, &mut left_a)?;
        } else {
            head_b = pull(machine, b, &mut left_b)?;
        }
        written += 1;
    }
    Ok(written)
}

fn pull(
    machine: &mut Machine,
    head: &mut PassHandle,
    quota: &mut usize,
) -> Result<Option<Vec<u8>>, MachineError> {
    if *quota == 0 {
        return Ok(None);
    }
    let record = machine.read(head);
    if let Some(r) = &record {
        *quota -= 1;
        machine.charge_memory(8 * r.len() as u64)?;
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_vm::{MachineConfig, ModelKind};

    fn scratch() -> [TapeId; 4] {
        [
            TapeId::Work(0),
            TapeId::Work(1),
            TapeId::Work(2),
            TapeId::Work(3),
        ]
    }

    #[test]
    fn sorts_stably_with_logarithmic_levels() {
        let records: Vec<Vec<u8>> = (0..37u8).map(|i| vec![(i * 7) % 5, i]).collect();
        let mut m = Machine::with_records(
            MachineConfig::new(ModelKind::ReadWrite, 4096),
            records.clone(),
        )
        .unwrap();
        merge_sort_tape(&mut m, TapeId::Input, scratch(), |x, y| x[0].cmp(&y[0])).unwrap();
        let mut expected = records;
        expected.sort_by_key(|r| r[0]);
        assert_eq!(
            m.tape(TapeId::Input).unwrap().records(),
            expected.as_slice()
        );
        // distribution: 3 heads; 6 levels of 4 heads except the last with 3
        let levels = u64::from(ceil_log2(37));
        assert_eq!(m.ledger().passes, 3 + 4 * levels - 1);
        assert_eq!(m.memory_in_use(), 0);
        assert!(m.ledger().peak_memory_bits <= 2 * 16 + 3 * 6);
    }

    #[test]
    fn trivial_tapes_cost_nothing() {
        let mut m =
            Machine::with_records(MachineConfig::new(ModelKind::ReadWrite, 64), vec![vec![1]])
                .unwrap();
        merge_sort_tape(&mut m, TapeId::Input, scratch(), |x, y| x.cmp(y)).unwrap();
        assert_eq!(m.ledger().passes, 0);
    }
}
