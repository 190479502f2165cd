use nambu_core::{Status, VerificationReport};

#[derive(Default)]
pub struct Outcome {
    pub model: String,
    pub command: String,
    pub reports: Vec<VerificationReport>,
}

impl Outcome {
    pub fn status(&self) -> Status {
        self.reports.iter().fold(Status::Pass, |s, r| s.combine(r.status))
    }

    /// 0 all pass, 1 any failure, 3 indeterminate without failures.
    pub fn exit_code(&self) -> u8 {
        match self.status() {
            Status::Fail => 1,
            Status::Indeterminate => 3,
            _ => 0,
        }
    }
}

pub fn print(out: &Outcome, json: bool, timing: bool) {
    let mut reports = out.reports.clone();
    if !timing {
        for r in &mut reports {
            r.elapsed_ms = None;
        }
    }
    if json {
        let v = serde_json::json!({
            "model": out.model,
            "command": out.command,
            "status": out.status(),
            "reports": reports,
        });
        println!("{}", serde_json::to_string_pretty(&v).unwrap());
        return;
    }
    println!("model: {}", out.model);
    for r in &reports {
        let mut line = format!("{:<18} {} ({} cases)", r.status.label().to_uppercase(), r.check, r.cases);
        if let Some(ms) = r.elapsed_ms {
            line.push_str(&format!(" [{ms} ms]"));
        }
        println!("{line}");
        for (k, v) in &r.values {
            println!("    {k} = {v}");
        }
        for w in &r.witnesses {
            println!("    witness {}: {}", w.element, w.residual);
        }
        for n in &r.notes {
            println!("    note: {n}");
        }
        if let Some(p) = &r.probabilistic {
            println!("    probabilistic: seed {}, {} samples, tolerance {:e}", p.seed, p.samples, p.tolerance);
        }
    }
    println!("overall: {}", out.status().label());
}
