//! Plain-text reports printed by `aoi mine`.

use std::fmt::Write;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use aoi_core::{LearningTask, MiningResult, Notation};

/// Wall-clock time of day as `HH:MM:SS:mmm` (UTC).
pub fn clock(t: SystemTime) -> String {
    let since = t.duration_since(UNIX_EPOCH).unwrap_or_default();
    let ms = since.as_millis() % 86_400_000;
    format!(
        "{:02}:{:02}:{:02}:{:03}",
        ms / 3_600_000,
        ms / 60_000 % 60,
        ms / 1000 % 60,
        ms % 1000
    )
}

/// Elapsed time as `M:SS:mmm`.
pub fn elapsed(d: Duration) -> String {
    let ms = d.as_millis();
    format!("{}:{:02}:{:03}", ms / 60_000, ms / 1000 % 60, ms % 1000)
}

#[derive(Debug, Clone, Copy)]
pub struct Timing {
    pub start: SystemTime,
    pub finish: SystemTime,
}

pub fn render_table_report(
    task: &LearningTask,
    result: &MiningResult,
    notation: Notation,
    trace: bool,
    timing: Option<Timing>,
) -> String {
    let mut out = String::new();
    out.push_str("Characteristic rule with concept hierarchy as table\n\n");
    let _ = writeln!(out, "{}: {}", task.class_attribute, task.target_concept);
    let _ = writeln!(out, "Generalization Threshold: {}", task.relation_threshold);
    if task.attribute_threshold != task.relation_threshold {
        let _ = writeln!(out, "Attribute Threshold: {}", task.attribute_threshold);
    }
    if let Some(t) = timing {
        let _ = writeln!(out, "Start : {}", clock(t.start));
        let _ = writeln!(out, "Finish : {}", clock(t.finish));
        let took = t.finish.duration_since(t.start).unwrap_or_default();
        let _ = writeln!(out, "Time : {}", elapsed(took));
    }

    if trace {
        out.push_str("\nTrace\n");
        for r in &result.trace.removed {
            let _ = writeln!(out, "REMOVE {r}");
        }
        for s in &result.trace.steps {
            let _ = writeln!(out, "{s}");
        }
        out.push_str("\nCR profile\n");
        let _ = write!(out, "{}", result.trace.profile_table());
    }

    out.push_str("\nTable Generalization\n");
    let _ = write!(out, "{}", result.characterized);
    out.push_str("\nAttribute Scores\n");
    let _ = write!(out, "{}", result.report);
    out.push_str("\nFinal Generalization\n");
    let _ = write!(out, "{}", result.relation);
    out.push_str("\nRule\n");
    let _ = writeln!(out, "{}", result.rule.render(notation));
    out
}
