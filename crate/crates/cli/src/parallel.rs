//! Threaded interval sweeps. Partial tables are merged in range order, and
//! exact sums make the result independent of the split.

use std::num::NonZeroUsize;
use std::thread;

use tmtower::pte::{self, PartitionSpec, PowerSumTable, PteVerdict};

/// Below this many points a sweep stays on the calling thread.
const MIN_POINTS_PER_THREAD: u64 = 1 << 14;

pub fn thread_count(requested: Option<usize>) -> usize {
    requested
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, NonZeroUsize::get))
        .max(1)
}

pub fn power_sums(
    spec: &PartitionSpec,
    max_degree: u32,
    budget: u64,
    threads: usize,
) -> tmtower::Result<PowerSumTable> {
    let len = spec.interval_length(budget)?;
    let classifier = spec.classifier()?;
    let classes = spec.classes();
    let workers = (threads as u64).min(len / MIN_POINTS_PER_THREAD).max(1);
    if workers > 1 {
        eprintln!("summing {len} points on {workers} threads");
    }
    let chunk = len.div_ceil(workers);
    let parts: Vec<PowerSumTable> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let range = w * chunk..((w + 1) * chunk).min(len);
                let classifier = &classifier;
                s.spawn(move || {
                    PowerSumTable::accumulate(classes, max_degree, len, range, |n| classifier.class(n))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    let mut parts = parts.into_iter();
    let mut table = parts.next().expect("at least one worker");
    for p in parts {
        table.merge(&p);
    }
    Ok(table)
}

pub fn verify(spec: &PartitionSpec, budget: u64, threads: usize) -> tmtower::Result<(PteVerdict, PowerSumTable)> {
    let table = power_sums(spec, pte::sharpness_degree(spec)?, budget, threads)?;
    Ok((pte::judge(spec, &table)?, table))
}
