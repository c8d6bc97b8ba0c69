use serde::Serialize;

pub const SCHEMA: &str = "liftcalc/1";

#[derive(Debug, Serialize)]
pub struct ComputeReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub q: u32,
    pub ext: &'static str,
    pub level: u32,
    pub precision: i32,
    pub gamma: String,
    pub mu: String,
    pub index: String,
    pub classification: String,
    pub distance: String,
    /// False when γ lies in O_F^× to working precision (distance printed as 0).
    pub distance_exact: bool,
    pub phi_gamma_dprime: String,
    pub v_x: String,
    pub v_y: String,
    pub v_z: String,
    pub v_abar: Option<String>,
    pub gl2_oracle: Option<Gl2Summary>,
    pub notes: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct Gl2Summary {
    pub level: u32,
    pub v_y: String,
    pub certified: bool,
    pub flat_classes: u64,
    pub refined_classes: u64,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub q: u32,
    pub precision: i32,
    pub samples: usize,
    pub seed: u64,
    pub gl2_levels: Vec<u32>,
    pub orders: Vec<String>,
    pub identities: Vec<IdentityRow>,
}

#[derive(Debug, Serialize)]
pub struct IdentityRow {
    pub name: String,
    pub samples: u64,
    pub failures: u64,
    pub skipped: u64,
    pub max_discrepancy: String,
    pub notes: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct TableReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub q: u32,
    pub ext: &'static str,
    pub precision: i32,
    pub levels: Vec<u32>,
    pub rows: Vec<TableRow>,
}

#[derive(Debug, Serialize)]
pub struct TableRow {
    pub gamma: String,
    /// v_x per level, in the order of `levels`.
    pub v_x: Vec<String>,
    pub classification: Vec<String>,
}

pub const INSUFFICIENT: &str = "InsufficientPrecision";

impl ComputeReport {
    pub fn any_insufficient(&self) -> bool {
        let mut fields = vec![
            &self.classification,
            &self.distance,
            &self.phi_gamma_dprime,
            &self.v_x,
            &self.v_y,
            &self.v_z,
        ];
        fields.extend(self.v_abar.as_ref());
        fields.extend(self.gl2_oracle.as_ref().map(|g| &g.v_y));
        fields.into_iter().any(|f| f == INSUFFICIENT)
    }

    pub fn to_csv(&self) -> csv::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "schema", "q", "ext", "level", "precision", "gamma", "mu", "index", "classification", "distance",
            "phi_gamma_dprime", "v_x", "v_y", "v_z", "v_abar", "gl2_v_y", "notes",
        ])?;
        w.write_record([
            SCHEMA.to_string(),
            self.q.to_string(),
            self.ext.to_string(),
            self.level.to_string(),
            self.precision.to_string(),
            self.gamma.clone(),
            self.mu.clone(),
            self.index.clone(),
            self.classification.clone(),
            self.distance.clone(),
            self.phi_gamma_dprime.clone(),
            self.v_x.clone(),
            self.v_y.clone(),
            self.v_z.clone(),
            self.v_abar.clone().unwrap_or_default(),
            self.gl2_oracle.as_ref().map(|g| g.v_y.clone()).unwrap_or_default(),
            self.notes.join("; "),
        ])?;
        finish(w)
    }
}

impl VerifyReport {
    pub fn failures(&self) -> u64 {
        self.identities.iter().map(|r| r.failures).sum()
    }

    pub fn to_csv(&self) -> csv::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["name", "samples", "failures", "skipped", "max_discrepancy"])?;
        for r in &self.identities {
            w.write_record([
                r.name.clone(),
                r.samples.to_string(),
                r.failures.to_string(),
                r.skipped.to_string(),
                r.max_discrepancy.clone(),
            ])?;
        }
        finish(w)
    }
}

impl TableReport {
    pub fn any_insufficient(&self) -> bool {
        self.rows.iter().flat_map(|r| r.v_x.iter()).any(|v| v == INSUFFICIENT)
    }

    pub fn to_csv(&self) -> csv::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["gamma".to_string()];
        header.extend(self.levels.iter().map(|s| format!("s={s}")));
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![r.gamma.clone()];
            rec.extend(r.v_x.iter().cloned());
            w.write_record(&rec)?;
        }
        finish(w)
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> csv::Result<String> {
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
