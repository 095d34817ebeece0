//! Structured pass/fail reporting shared by the verification commands.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CheckItem {
    pub item: String,
    pub description: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

impl CheckItem {
    pub fn new(item: &str, description: &str, pass: bool) -> Self {
        Self { item: item.to_string(), description: description.to_string(), pass, witness: None }
    }

    pub fn with_witness(mut self, witness: serde_json::Value) -> Self {
        self.witness = Some(witness);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub title: String,
    pub checks: Vec<CheckItem>,
}

impl CheckReport {
    pub fn new(title: &str) -> Self {
        Self { title: title.to_string(), checks: Vec::new() }
    }

    pub fn push(&mut self, item: CheckItem) {
        self.checks.push(item);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("{}\n", self.title);
        for c in &self.checks {
            let status = if c.pass { "ok" } else { "FAIL" };
            out.push_str(&format!("  [{status}] {}: {}\n", c.item, c.description));
        }
        let overall = if self.pass() { "PASS" } else { "FAIL" };
        out.push_str(&format!("overall: {overall}\n"));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_fails_if_any_item_fails() {
        let mut r = CheckReport::new("t");
        r.push(CheckItem::new("a", "first", true));
        assert!(r.pass());
        r.push(CheckItem::new("b", "second", false));
        assert!(!r.pass());
        assert!(r.render_text().contains("[FAIL] b"));
        assert!(r.render_text().ends_with("overall: FAIL\n"));
    }

    #[test]
    fn witness_is_omitted_when_absent() {
        let item = CheckItem::new("a", "first", true);
        assert_eq!(serde_json::to_string(&item).unwrap(), r#"{"item":"a","description":"first","pass":true}"#);
    }
}
