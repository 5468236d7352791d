use std::io::Write;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use suspensia_core::algebra::{Grading, PresentedAlgebra};
use suspensia_core::constructions::certify_bundle;
use suspensia_core::derivation::{Derivation, DerivationCertificate, LndCertificate};
use suspensia_core::parse_io::{
    load_document, parse_expression, to_canonical_json, AlgebraFile, DerivationFile, Document, LoadedAlgebra,
};
use suspensia_core::poly::{Coeff, Polynomial};
use suspensia_core::suspension::{
    default_names, lift_lnd, lift_lnd_through_root, suspend_named, torus_action, Lifted, Suspension,
};

use crate::{Cli, Command, DerivationSelect, Failure, SuspensionArgs, EXIT_CHECK_FAILED, EXIT_INCONCLUSIVE, EXIT_OK};

type Out<'a> = &'a mut dyn Write;

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(|e| Failure::input(format!("write failed: {e}")))?
    };
}

pub fn dispatch(cli: &Cli, out: Out, err: Out) -> Result<i32, Failure> {
    if cli.cap == 0 {
        return Err(Failure::input("--cap must be positive"));
    }
    let cap = cli.cap;
    match &cli.command {
        Command::Validate { file } => validate(file, out),
        Command::Groebner { file } => groebner(file, out),
        Command::CertifyDerivation { select, grading, out: path } => {
            certify(select, grading.as_deref(), path.as_deref(), cap, out)
        }
        Command::Decompose { select, grading, row } => decompose(select, grading, *row, cap, out),
        Command::Homogenize { select, grading } => homogenize(select, grading, cap, out),
        Command::Suspend { file, susp, out: dir } => suspend_cmd(file, susp, dir.as_deref(), out),
        Command::Torus { file, susp } => torus_cmd(file, susp, out),
        Command::Lift {
            select,
            f,
            k,
            names,
            root,
            e,
            new,
            out: path,
        } => {
            let mode = match (f, k, root, e) {
                (Some(f), Some(k), None, None) => LiftMode::Suspension(SuspensionArgs {
                    f: f.clone(),
                    k: k.clone(),
                    names: names.clone(),
                }),
                (None, None, Some(r), Some(e)) => LiftMode::Root {
                    var: r.clone(),
                    e: *e,
                    new: new.clone(),
                },
                _ => return Err(Failure::input("lift needs either --f and --k, or --root and --e")),
            };
            lift(select, mode, path.as_deref(), cap, out)
        }
        Command::BuildYp { p, n, out: dir } => build_yp(*p, *n, dir, cap, out, err),
        Command::Exp { select, t, s } => exp(select, t, s.as_deref(), cap, out),
    }
}

fn load(path: &Path) -> Result<Document, Failure> {
    Ok(load_document(path)?)
}

fn select(sel: &DerivationSelect) -> Result<(LoadedAlgebra, Derivation), Failure> {
    let doc = load(&sel.file)?;
    let images = match &doc {
        Document::Derivation { images, .. } => {
            if sel.name.is_some() {
                return Err(Failure::input("--name applies only to algebra files"));
            }
            images.clone()
        }
        Document::Algebra(a) => {
            let found = match &sel.name {
                Some(n) => a.derivations.iter().find(|(k, _)| k == n),
                None if a.derivations.len() == 1 => a.derivations.first(),
                None if a.derivations.is_empty() => return Err(Failure::input("file defines no derivation")),
                None => return Err(Failure::input("file defines several derivations; pick one with --name")),
            };
            let (_, images) = found.ok_or_else(|| Failure::input("no derivation with that name"))?;
            images.clone()
        }
    };
    let loaded = doc.algebra().clone();
    let d = Derivation::new(&loaded.algebra, images)?;
    Ok((loaded, d))
}

fn grading<'a>(a: &'a LoadedAlgebra, name: &str) -> Result<&'a Grading, Failure> {
    a.grading(name)
        .ok_or_else(|| Failure::input(format!("no grading named `{name}`")))
}

fn write_file(path: &Path, content: &str) -> Result<(), Failure> {
    std::fs::write(path, content).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn lnd_code(c: &LndCertificate) -> i32 {
    if c.is_certified() {
        EXIT_OK
    } else {
        EXIT_INCONCLUSIVE
    }
}

fn print_images(d: &Derivation, out: Out) -> Result<(), Failure> {
    for (v, img) in d.algebra().vars().iter().zip(d.images()) {
        say!(out, "  d({v}) = {img}");
    }
    Ok(())
}

fn print_lnd(c: &LndCertificate, out: Out) -> Result<(), Failure> {
    let status = if c.is_certified() { "certified" } else { "inconclusive" };
    say!(out, "lnd: {status} (cap {})", c.cap);
    for (v, n) in c.orders.iter() {
        say!(out, "  nu({v}) = {n}");
    }
    Ok(())
}

fn print_certificate(c: &DerivationCertificate, out: Out) -> Result<(), Failure> {
    for r in &c.well_defined {
        say!(out, "relation {}: image {} (zero before reduction: {})", r.relation, r.image, r.raw_image_zero);
    }
    print_lnd(&c.lnd, out)?;
    if let Some(deg) = &c.homogeneous {
        say!(out, "homogeneous of degree {deg:?}");
    }
    Ok(())
}

fn describe_algebra(a: &PresentedAlgebra, out: Out) -> Result<(), Failure> {
    say!(out, "field: {}", a.field());
    say!(out, "variables: {}", a.vars().join(", "));
    say!(out, "order: {}", a.order().describe(a.vars()));
    for r in a.relations() {
        say!(out, "relation: {r}");
    }
    Ok(())
}

fn validate(file: &Path, out: Out) -> Result<i32, Failure> {
    let doc = load(file)?;
    let loaded = doc.algebra();
    describe_algebra(&loaded.algebra, out)?;
    for (name, g) in &loaded.gradings {
        say!(out, "grading {name}: relation degrees {:?}", g.relation_degrees());
    }
    let derivations: Vec<(String, Vec<Polynomial>)> = match &doc {
        Document::Algebra(a) => a.derivations.clone(),
        Document::Derivation { images, .. } => vec![("derivation".into(), images.clone())],
    };
    for (name, images) in derivations {
        Derivation::new(&loaded.algebra, images)?;
        say!(out, "derivation {name}: well defined");
    }
    say!(out, "ok");
    Ok(EXIT_OK)
}

fn groebner(file: &Path, out: Out) -> Result<i32, Failure> {
    let doc = load(file)?;
    let a = &doc.algebra().algebra;
    say!(out, "order: {}", a.order().describe(a.vars()));
    for g in a.basis().generators() {
        say!(out, "{g}");
    }
    Ok(EXIT_OK)
}

fn certify(sel: &DerivationSelect, grading_name: Option<&str>, path: Option<&Path>, cap: u32, out: Out) -> Result<i32, Failure> {
    let (loaded, d) = select(sel)?;
    let g = grading_name.map(|n| grading(&loaded, n)).transpose()?;
    let cert = d.certificate(cap, g);
    print_certificate(&cert, out)?;
    if let (Some(_), None) = (g, &cert.homogeneous) {
        say!(out, "not homogeneous for the grading");
    }
    if let Some(p) = path {
        write_file(p, &to_canonical_json(&cert))?;
    }
    Ok(lnd_code(&cert.lnd))
}

fn decompose(sel: &DerivationSelect, grading_name: &str, row: usize, cap: u32, out: Out) -> Result<i32, Failure> {
    let (loaded, d) = select(sel)?;
    let g = grading(&loaded, grading_name)?;
    let dec = d.decompose(g, row)?;
    match dec.range() {
        Some((l, k)) => say!(out, "range: {l}..{k}"),
        None => say!(out, "zero derivation: no components"),
    }
    for (i, c) in &dec.components {
        say!(out, "component {i}:");
        print_images(c, out)?;
    }
    let lnd = d.certify_lnd(cap);
    if lnd.is_certified() {
        for (label, c) in [("lowest", dec.lowest()), ("highest", dec.highest())] {
            if let Some(c) = c {
                let status = if c.certify_lnd(cap).is_certified() { "certified" } else { "inconclusive" };
                say!(out, "{label} component lnd: {status}");
            }
        }
    }
    let ok = dec.reconstructs(&d);
    say!(out, "components sum to the derivation: {ok}");
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn homogenize(sel: &DerivationSelect, grading_name: &str, cap: u32, out: Out) -> Result<i32, Failure> {
    let (loaded, d) = select(sel)?;
    let g = grading(&loaded, grading_name)?;
    let cert = d.certify_lnd(cap);
    if !cert.is_certified() {
        print_lnd(&cert, out)?;
        return Err(Failure::inconclusive("input is not a certified LND"));
    }
    let h = d.homogenize_lnd(&cert, g)?;
    say!(out, "homogeneous component of degree {:?}:", h.degree);
    print_images(&h.derivation, out)?;
    print_lnd(&h.certificate, out)?;
    Ok(lnd_code(&h.certificate))
}

fn build_suspension(loaded: &LoadedAlgebra, susp: &SuspensionArgs) -> Result<Suspension, Failure> {
    let a = &loaded.algebra;
    let f = parse_expression(&susp.f, a.ring()).map_err(|e| Failure::input(format!("--f: {e}")))?;
    let names = susp.names.clone().unwrap_or_else(|| default_names(susp.k.len()));
    Ok(suspend_named(a, &f, &susp.k, &names)?)
}

fn suspend_cmd(file: &Path, susp: &SuspensionArgs, dir: Option<&Path>, out: Out) -> Result<i32, Failure> {
    let doc = load(file)?;
    let s = build_suspension(doc.algebra(), susp)?;
    describe_algebra(&s.algebra, out)?;
    let criterion = s.criterion();
    say!(out, "gcd d = {}: {:?}", criterion.d, criterion.verdict);
    let torus = if s.spec.exponents.len() >= 2 {
        let t = torus_action(&s)?;
        say!(out, "torus weights: {:?}", t.matrix());
        Some(t)
    } else {
        None
    };
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
        let mut file = AlgebraFile::from_algebra(&s.algebra);
        if let Some(t) = &torus {
            file = file.with_grading("torus", &t.grading);
            write_file(&dir.join("torus.json"), &to_canonical_json(&t.to_file(&s.spec)))?;
        }
        write_file(&dir.join("Y.json"), &file.to_json())?;
        write_file(&dir.join("criterion.json"), &to_canonical_json(&criterion))?;
    }
    Ok(EXIT_OK)
}

fn torus_cmd(file: &Path, susp: &SuspensionArgs, out: Out) -> Result<i32, Failure> {
    let doc = load(file)?;
    let s = build_suspension(doc.algebra(), susp)?;
    let t = torus_action(&s)?;
    out.write_all(to_canonical_json(&t.to_file(&s.spec)).as_bytes())
        .map_err(|e| Failure::input(format!("write failed: {e}")))?;
    Ok(EXIT_OK)
}

enum LiftMode {
    Suspension(SuspensionArgs),
    Root { var: String, e: u32, new: String },
}

fn lift(sel: &DerivationSelect, mode: LiftMode, path: Option<&Path>, cap: u32, out: Out) -> Result<i32, Failure> {
    let (loaded, d) = select(sel)?;
    let cert = d.certify_lnd(cap);
    if !cert.is_certified() {
        print_lnd(&cert, out)?;
        return Err(Failure::inconclusive("input is not a certified LND"));
    }
    let lifted: Lifted = match mode {
        LiftMode::Suspension(susp) => {
            let s = build_suspension(&loaded, &susp)?;
            lift_lnd(&d, &cert, &s)?
        }
        LiftMode::Root { var, e, new } => lift_lnd_through_root(&d, &cert, &var, &new, e)?,
    };
    describe_algebra(&lifted.algebra, out)?;
    say!(out, "lifted derivation:");
    print_images(&lifted.derivation, out)?;
    print_lnd(&lifted.certificate, out)?;
    if let Some(p) = path {
        let file = AlgebraFile::from_algebra(&lifted.algebra).with_derivation("lifted", &lifted.derivation);
        write_file(p, &file.to_json())?;
    }
    Ok(lnd_code(&lifted.certificate))
}

fn build_yp(p: u32, n: u32, dir: &Path, cap: u32, out: Out, err: Out) -> Result<i32, Failure> {
    let start = Instant::now();
    let b = certify_bundle(p, n, cap)?;
    std::fs::create_dir_all(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
    let xp = AlgebraFile::from_algebra(&b.xp).with_grading("deg", &b.xp_grading);
    let yp = AlgebraFile::from_algebra(&b.yp).with_grading("deg", &b.yp_grading);
    write_file(&dir.join("Xp.json"), &xp.to_json())?;
    write_file(&dir.join("Yp.json"), &yp.to_json())?;
    write_file(
        &dir.join("derivation.json"),
        &DerivationFile::from_derivation(&b.lnd.derivation, "Yp.json").to_json(),
    )?;
    write_file(&dir.join("certificate.json"), &to_canonical_json(&b.report))?;
    say!(out, "F = {}", b.report.f);
    say!(out, "G = {}", b.report.g);
    say!(out, "Xp relation degrees: {:?}", b.report.xp_relation_degrees);
    print_lnd(&b.lnd_certificate, out)?;
    say!(out, "lift ({}):", b.report.lift.root);
    print_lnd(&b.lifted_certificate, out)?;
    say!(out, "certified: {}", b.report.certified);
    let _ = writeln!(err, "build-yp p={p} n={n}: {:.3}s", start.elapsed().as_secs_f64());
    Ok(if b.report.certified { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn constant(a: &Arc<PresentedAlgebra>, text: &str, flag: &str) -> Result<Coeff, Failure> {
    let p = parse_expression(text, a.ring()).map_err(|e| Failure::input(format!("{flag}: {e}")))?;
    p.constant_value()
        .ok_or_else(|| Failure::input(format!("{flag} must be a constant")))
}

fn exp(sel: &DerivationSelect, t: &str, s: Option<&str>, cap: u32, out: Out) -> Result<i32, Failure> {
    let (loaded, d) = select(sel)?;
    let a = &loaded.algebra;
    let t = constant(a, t, "--t")?;
    let s = s.map(|s| constant(a, s, "--s")).transpose()?;
    let cert = d.certify_lnd(cap);
    if !cert.is_certified() {
        print_lnd(&cert, out)?;
        return Err(Failure::inconclusive("exp needs a certified LND"));
    }
    let m = d.exp(&cert, &t)?;
    say!(out, "exp(t d) with t = {t}; relations map into the ideal");
    for (v, img) in a.vars().iter().zip(m.images()) {
        say!(out, "  {v} -> {img}");
    }
    if let Some(s) = s {
        let ok = d.exp_group_law(&cert, &s, &t)?;
        say!(out, "exp(s d) exp(t d) = exp((s+t) d) with s = {s}: {ok}");
        if !ok {
            return Ok(EXIT_CHECK_FAILED);
        }
    }
    Ok(EXIT_OK)
}
