use crate::group::GroupElement;

/// Result of a sampled or exhaustive property check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub pass: bool,
    pub exhaustive: bool,
    pub checked: usize,
    pub worst_defect: f64,
    pub witnesses: Vec<Vec<GroupElement>>,
}

impl CheckReport {
    pub(crate) fn new(exhaustive: bool) -> Self {
        CheckReport {
            pass: true,
            exhaustive,
            checked: 0,
            worst_defect: 0.0,
            witnesses: Vec::new(),
        }
    }

    pub(crate) fn record(&mut self, defect: f64, tol: f64, witness: impl FnOnce() -> Vec<GroupElement>) {
        self.checked += 1;
        self.worst_defect = self.worst_defect.max(defect);
        if !(defect <= tol) {
            self.pass = false;
            if self.witnesses.len() < 8 {
                self.witnesses.push(witness());
            }
        }
    }

    /// `{flag, witnesses[], …}` with witnesses rendered as element strings.
    pub fn to_json(&self) -> serde_json::Value {
        let witnesses: Vec<Vec<String>> = self
            .witnesses
            .iter()
            .map(|w| w.iter().map(|g| g.to_string()).collect())
            .collect();
        serde_json::json!({
            "flag": self.pass,
            "exhaustive": self.exhaustive,
            "checked": self.checked,
            "worst_defect": self.worst_defect,
            "witnesses": witnesses,
        })
    }
}
