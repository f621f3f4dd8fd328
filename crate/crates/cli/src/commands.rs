use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use etale_twist::cocycle::{validate_cocycle, TwoCocycle};
use etale_twist::groupoid::{make_group_groupoid, validate_groupoid, FiniteGroup, FiniteGroupoid, GroupFile, GroupoidFile};
use etale_twist::io::{detect_schema, from_value, CocycleFile, HomotopyFile, Schema};
use etale_twist::ktheory::{k0_equal, k0_seeded, sample_grid, verify_homotopy_invariance, Verdict};
use etale_twist::report::ValidationReport;
use etale_twist::semidirect::{
    build_semidirect_groupoid, induce_cocycle_from_group, validate_directed_action, DirectedAction, DirectedActionFile,
    GroupCocycle,
};
use etale_twist::semigroup::{
    canonical_action, induced_cocycle_on_germs, spectrum, validate_inverse_semigroup, validate_twisted_action,
    FiniteInverseSemigroup, SemigroupFile, SemigroupTwistedAction, TwistedActionFile,
};
use etale_twist::twist::{build_sigma_omega, validate_twist};

use crate::error::CliError;
use crate::report::{InputDigest, RunReport};
use crate::{BuildKind, Cli, Command, GlobalArgs};

pub(crate) fn execute(cli: &Cli, echo: Vec<String>) -> RunReport {
    let mut ctx = Ctx { global: &cli.global, report: RunReport::new(echo) };
    let outcome = match &cli.command {
        Command::Validate { file, groupoid, semigroup } => ctx.validate(file, groupoid.as_deref(), semigroup.as_deref()),
        Command::K0 { groupoid, cocycle } => ctx.k0(groupoid, cocycle.as_deref()),
        Command::HomotopyCheck { groupoid, homotopy } => ctx.homotopy_check(groupoid, homotopy),
        Command::Build { kind } => match kind {
            BuildKind::Germ { semigroup, action, out } => ctx.build_germ(semigroup, action.as_deref(), out),
            BuildKind::Semidirect { action, cocycle, out } => ctx.build_semidirect(action, cocycle.as_deref(), out),
            BuildKind::Sigma { groupoid, cocycle, m, out } => ctx.build_sigma(groupoid, cocycle, *m, out),
        },
    };
    if let Err(e) = outcome {
        ctx.report.fail(&e);
    }
    ctx.report
}

struct Ctx<'a> {
    global: &'a GlobalArgs,
    report: RunReport,
}

fn show(p: &Path) -> String {
    p.display().to_string()
}

impl Ctx<'_> {
    fn line(&mut self, s: impl Into<String>) {
        self.report.lines.push(s.into());
    }

    fn step(&mut self, r: ValidationReport) {
        self.line(format!("{}: ok ({} checks)", r.subject, r.checks.len()));
        self.report.steps.push(r);
    }

    /// Reads a JSON file, records its digest and detects its schema.
    fn read(&mut self, path: &Path) -> Result<(Value, Schema), CliError> {
        let p = show(path);
        let bytes = std::fs::read(path).map_err(|e| CliError::Read { path: p.clone(), source: e })?;
        let parsed = serde_json::from_slice::<Value>(&bytes)
            .map_err(|e| CliError::Json { path: p.clone(), source: e })
            .and_then(|v| Ok((detect_schema(&v)?, v)));
        let schema = parsed.as_ref().map(|(s, _)| s.name()).unwrap_or("unknown");
        self.report.inputs.push(InputDigest::new(&p, schema, &bytes));
        let (schema, v) = parsed?;
        Ok((v, schema))
    }

    fn read_as(&mut self, path: &Path, expected: Schema) -> Result<Value, CliError> {
        let (v, found) = self.read(path)?;
        if found != expected {
            return Err(CliError::WrongSchema { path: show(path), expected: expected.name(), found: found.name() });
        }
        Ok(v)
    }

    fn groupoid_from(&mut self, v: Value) -> Result<Arc<FiniteGroupoid>, CliError> {
        let file: GroupoidFile = from_value("groupoid", v)?;
        self.step(validate_groupoid(&file)?);
        Ok(Arc::new(FiniteGroupoid::from_file(&file)?))
    }

    fn groupoid(&mut self, path: &Path) -> Result<Arc<FiniteGroupoid>, CliError> {
        let v = self.read_as(path, Schema::Groupoid)?;
        self.groupoid_from(v)
    }

    fn cocycle_on(&mut self, g: &Arc<FiniteGroupoid>, v: Value) -> Result<TwoCocycle, CliError> {
        let file: CocycleFile = from_value("cocycle", v)?;
        let w = file.resolve(g)?;
        self.step(validate_cocycle(&w, self.global.tol)?);
        Ok(w)
    }

    fn cocycle(&mut self, g: &Arc<FiniteGroupoid>, path: &Path) -> Result<TwoCocycle, CliError> {
        let v = self.read_as(path, Schema::Cocycle)?;
        self.cocycle_on(g, v)
    }

    fn semigroup_from(&mut self, v: Value) -> Result<Arc<FiniteInverseSemigroup>, CliError> {
        let file: SemigroupFile = from_value("semigroup", v)?;
        let s = validate_inverse_semigroup(&file)?;
        let mut r = ValidationReport::new("semigroup");
        r.passed_with("inverse semigroup", format!("{} elements, {} idempotents", s.len(), s.idempotents().len()));
        self.step(r);
        Ok(Arc::new(s))
    }

    fn action(&mut self, s: &Arc<FiniteInverseSemigroup>, path: Option<&Path>) -> Result<SemigroupTwistedAction, CliError> {
        let a = match path {
            Some(p) => {
                let file: TwistedActionFile = from_value("twisted_action", self.read_as(p, Schema::TwistedAction)?)?;
                SemigroupTwistedAction::from_file(s.clone(), &file)?
            }
            None => canonical_action(s)?,
        };
        self.step(validate_twisted_action(&a, self.global.tol)?);
        Ok(a)
    }

    fn require(&self, path: Option<&Path>, flag: &str, schema: Schema) -> Result<std::path::PathBuf, CliError> {
        path.map(Path::to_path_buf)
            .ok_or_else(|| CliError::Usage(format!("validating a {} file needs {flag}", schema.name())))
    }

    fn validate(&mut self, path: &Path, groupoid: Option<&Path>, semigroup: Option<&Path>) -> Result<(), CliError> {
        let (v, schema) = self.read(path)?;
        let mut summary = serde_json::Map::new();
        summary.insert("schema".into(), json!(schema.name()));
        match schema {
            Schema::Groupoid => {
                let g = self.groupoid_from(v)?;
                summary.insert("arrows".into(), json!(g.len()));
                summary.insert("units".into(), json!(g.units().len()));
            }
            Schema::Group => {
                let file: GroupFile = from_value("group", v)?;
                let group = FiniteGroup::from_file(&file)?;
                let mut r = ValidationReport::new("group");
                r.passed_with("group axioms", format!("order {}", group.order()));
                self.step(r);
                summary.insert("order".into(), json!(group.order()));
            }
            Schema::Cocycle => {
                let gp = self.require(groupoid, "--groupoid", schema)?;
                let g = self.groupoid(&gp)?;
                let w = self.cocycle_on(&g, v)?;
                summary.insert("exact".into(), json!(w.is_exact()));
            }
            Schema::Homotopy => {
                let gp = self.require(groupoid, "--groupoid", schema)?;
                let g = self.groupoid(&gp)?;
                let file: HomotopyFile = from_value("homotopy", v)?;
                let h = file.resolve(&g)?;
                let mut invalid = Vec::new();
                let mut first = None;
                let grid = sample_grid(self.global.samples as usize);
                for &t in &grid {
                    if let Err(e) = h.sample_at(t, self.global.tol) {
                        invalid.push(t.to_string());
                        first.get_or_insert(e);
                    }
                }
                if let Some(first) = first {
                    return Err(CliError::InvalidSamples { times: invalid, first });
                }
                let mut r = ValidationReport::new("homotopy");
                r.passed_with("samples", format!("{} valid samples", grid.len()));
                self.step(r);
                summary.insert("kind".into(), json!(h.kind_name()));
                summary.insert("samples".into(), json!(grid.len()));
            }
            Schema::Semigroup => {
                let s = self.semigroup_from(v)?;
                summary.insert("elements".into(), json!(s.len()));
                summary.insert("characters".into(), json!(spectrum(&s)?.len()));
            }
            Schema::TwistedAction => {
                let sp = self.require(semigroup, "--semigroup", schema)?;
                let sv = self.read_as(&sp, Schema::Semigroup)?;
                let s = self.semigroup_from(sv)?;
                let file: TwistedActionFile = from_value("twisted_action", v)?;
                let a = SemigroupTwistedAction::from_file(s, &file)?;
                self.step(validate_twisted_action(&a, self.global.tol)?);
                summary.insert("points".into(), json!(a.space().len()));
            }
            Schema::DirectedAction => {
                let file: DirectedActionFile = from_value("directed_action", v)?;
                let a = DirectedAction::from_file(&file)?;
                self.step(validate_directed_action(&a)?);
                summary.insert("points".into(), json!(a.points().len()));
            }
        }
        summary.insert("valid".into(), json!(true));
        self.line(format!("{}: valid", schema.name()));
        self.report.result = Some(Value::Object(summary));
        Ok(())
    }

    fn k0(&mut self, groupoid: &Path, cocycle: Option<&Path>) -> Result<(), CliError> {
        let g = self.groupoid(groupoid)?;
        let w = match cocycle {
            Some(p) => self.cocycle(&g, p)?,
            None => TwoCocycle::trivial(g.clone()),
        };
        let data = k0_seeded(&g, &w, self.global.seed)?;
        self.line(data.to_string());
        self.line(format!("unit class {:?}", data.unit_class));
        self.report.result = Some(serde_json::to_value(&data).expect("plain data"));
        Ok(())
    }

    fn homotopy_check(&mut self, groupoid: &Path, homotopy: &Path) -> Result<(), CliError> {
        let g = self.groupoid(groupoid)?;
        let file: HomotopyFile = from_value("homotopy", self.read_as(homotopy, Schema::Homotopy)?)?;
        let h = file.resolve(&g)?;
        let gl = self.global;
        let r = verify_homotopy_invariance(&g, &h, gl.samples as usize, gl.seed, gl.tol)?;
        for s in &r.samples {
            let k = s.k0.as_ref().map_or_else(|| "invalid".to_string(), ToString::to_string);
            self.line(format!("t = {:.4}  {k}", s.t));
        }
        self.line(format!("verdict {}", serde_json::to_value(r.verdict).unwrap().as_str().unwrap()));
        self.report.result = Some(serde_json::to_value(&r).expect("plain data"));
        if r.verdict == Verdict::Fail {
            let first = r.samples[0].k0.as_ref();
            let at = r
                .samples
                .iter()
                .find(|s| match (first, s.k0.as_ref()) {
                    (Some(a), Some(b)) => !k0_equal(a, b),
                    _ => true,
                })
                .map_or_else(String::new, |s| s.t.to_string());
            return Err(CliError::NotInvariant { at });
        }
        Ok(())
    }

    fn write<T: Serialize>(&mut self, dir: &Path, name: &str, schema: &str, value: &T) -> Result<(), CliError> {
        let path = dir.join(name);
        let text = serde_json::to_string_pretty(value).expect("plain data") + "\n";
        std::fs::write(&path, &text).map_err(|e| CliError::Write { path: show(&path), source: e })?;
        self.report.outputs.push(InputDigest::new(&show(&path), schema, text.as_bytes()));
        self.line(format!("wrote {}", show(&path)));
        Ok(())
    }

    fn out_dir(&self, out: &Path) -> Result<(), CliError> {
        std::fs::create_dir_all(out).map_err(|e| CliError::Write { path: show(out), source: e })
    }

    fn built(&mut self, kind: &str, g: &FiniteGroupoid) {
        self.report.result = Some(json!({
            "kind": kind,
            "arrows": g.len(),
            "units": g.units().len(),
            "files": self.report.outputs.iter().map(|o| o.path.clone()).collect::<Vec<_>>(),
        }));
    }

    fn build_germ(&mut self, semigroup: &Path, action: Option<&Path>, out: &Path) -> Result<(), CliError> {
        let sv = self.read_as(semigroup, Schema::Semigroup)?;
        let s = self.semigroup_from(sv)?;
        let a = self.action(&s, action)?;
        let (gg, w) = induced_cocycle_on_germs(&a, self.global.tol)?;
        let g = gg.groupoid.clone();
        let germs: Vec<Value> = gg
            .entries()
            .map(|((e, x), arrow)| json!({"s": s.name(e), "x": a.point_name(x), "arrow": g.name(arrow)}))
            .collect();
        self.out_dir(out)?;
        self.write(out, "groupoid.json", "groupoid", &g.to_file())?;
        self.write(out, "germ_map.json", "germ_map", &json!({ "germs": germs }))?;
        self.write(out, "cocycle.json", "cocycle", &CocycleFile::from_cocycle(&w))?;
        self.built("germ", &g);
        Ok(())
    }

    fn build_semidirect(&mut self, action: &Path, cocycle: Option<&Path>, out: &Path) -> Result<(), CliError> {
        let file: DirectedActionFile = from_value("directed_action", self.read_as(action, Schema::DirectedAction)?)?;
        let a = DirectedAction::from_file(&file)?;
        self.step(validate_directed_action(&a)?);
        let sg = build_semidirect_groupoid(&a)?;
        let gamma = sg.gamma.clone();
        let gc = match cocycle {
            Some(p) => {
                let gg = Arc::new(make_group_groupoid(&gamma));
                let w = self.cocycle(&gg, p)?;
                GroupCocycle::from_fn(gamma.clone(), |x, y| w.at(x, y))?
            }
            None => GroupCocycle::trivial(gamma.clone()),
        };
        let w = induce_cocycle_from_group(&gc, &sg)?;
        let g = sg.groupoid.clone();
        let labels: BTreeMap<&str, &str> = (0..g.len()).map(|i| (g.name(i), gamma.name(sg.labeling[i]))).collect();
        self.out_dir(out)?;
        self.write(out, "groupoid.json", "groupoid", &g.to_file())?;
        self.write(out, "labeling.json", "labeling", &json!({ "gamma": gamma.to_file(), "labels": labels }))?;
        self.write(out, "cocycle.json", "cocycle", &CocycleFile::from_cocycle(&w))?;
        self.built("semidirect", &g);
        Ok(())
    }

    fn build_sigma(&mut self, groupoid: &Path, cocycle: &Path, m: usize, out: &Path) -> Result<(), CliError> {
        if m == 0 {
            return Err(CliError::Usage("--m must be positive".into()));
        }
        let g = self.groupoid(groupoid)?;
        let w = self.cocycle(&g, cocycle)?;
        let t = build_sigma_omega(&w, m)?;
        self.step(validate_twist(&t)?);
        let total = t.total().clone();
        let i: BTreeMap<&str, Vec<&str>> = g
            .units()
            .iter()
            .map(|&u| (g.name(u), t.inclusion()[u].iter().map(|&a| total.name(a)).collect()))
            .collect();
        let j: BTreeMap<&str, &str> = (0..total.len()).map(|s| (total.name(s), g.name(t.project(s)))).collect();
        self.out_dir(out)?;
        self.write(out, "groupoid.json", "groupoid", &total.to_file())?;
        self.write(out, "sigma.json", "sigma", &json!({ "m": m, "i": i, "j": j }))?;
        self.built("sigma", &total);
        Ok(())
    }
}
