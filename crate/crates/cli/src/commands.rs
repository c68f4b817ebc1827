use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use floerkit::chambers::{
    derive_chamber, equivariant_groups, fundamental_sequence, h_invariant, j_map, torsion_transport,
};
use floerkit::cobord::{
    induced_maps, lefschetz, sw_endo, sw_trace, validate_cobordism, CobordismData,
};
use floerkit::deltacx::{fmt_degree, CohomologyPackage, Degree, DeltaComplex};
use floerkit::exactalg::linalg::rank;
use floerkit::exactalg::{fmt_scalar, Coefficients};
use floerkit::hinv::{char_vector_max, diagonal_gram, e8_gram, froyshov_check, lens_h_table, BoundarySpec};
use floerkit::oracle::{
    berger_family, generate_random_delta, morse_cross_check, mv_splice, spectral_flow, RandomParams,
};
use floerkit::{Error, Result};
use num_rational::Rational64;
use serde_json::{json, Value};

use crate::format::InstanceFile;
use crate::{resolve, Command, Report, EXIT_UNSUPPORTED};

pub fn dispatch(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Validate { file } => validate(file),
        Command::Cohom { file } => cohom(file),
        Command::Chambers { file, to, emit } => chambers(file, to, emit.as_deref()),
        Command::Equivariant { file, window } => equivariant(file, window.as_deref()),
        Command::Fundseq { file, window } => fundseq(file, (window[0], window[1])),
        Command::Hinv { file, characteristic } => hinv(file, *characteristic),
        Command::Dual { file, emit } => dual(file, emit.as_deref()),
        Command::CobordValidate { file } => cobord_validate(file),
        Command::Lefschetz { file } => lefschetz_cmd(file),
        Command::Sw { file, n } => sw(file, *n),
        Command::Froyshov { file, h, b2, sigma, c1sq } => {
            froyshov(file.as_deref(), h, *b2, *sigma, c1sq.as_deref())
        }
        Command::Lens { q } => lens(*q),
        Command::Obstruct { lattice, bound } => obstruct(lattice, *bound),
        Command::OracleMv { n, hb, window, model } => oracle_mv(*n, hb, window.as_deref(), model.as_deref()),
        Command::OracleSpecflow { file, berger } => oracle_specflow(file.as_deref(), *berger),
        Command::Gen { seed, size, characteristic, emit } => gen(*seed, *size, *characteristic, emit.as_deref()),
    }
}

pub fn load(file: &str) -> Result<InstanceFile> {
    InstanceFile::read(&resolve(file))
}

pub fn parse_rational(s: &str) -> Result<Rational64> {
    let bad = || Error::Parse(format!("expected an integer or p/q, got {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(p, q))
        }
        None => Ok(Rational64::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn deg(q: &Degree) -> String {
    fmt_degree(q)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))
}

fn validated(c: &DeltaComplex) -> Result<CohomologyPackage> {
    c.validate().into_result()?;
    c.cohomology()
}

/// The same complex over ℚ, for invariants that need a field.
fn over_field(c: &DeltaComplex) -> Result<DeltaComplex> {
    if c.coeff.is_field() {
        Ok(c.clone())
    } else {
        c.with_coefficients(&Coefficients::Rationals)
    }
}

fn header(f: &InstanceFile) -> String {
    format!(
        "{}  [{}]  chamber m = {}  generators: {}\n",
        f.name,
        f.coefficients,
        deg(&Degree::new(f.complex.chamber.num, f.complex.chamber.den)),
        f.complex.generators.len()
    )
}

fn torsion_group<T: std::fmt::Display>(orders: &[T]) -> String {
    if orders.is_empty() {
        "0".to_string()
    } else {
        orders.iter().map(|x| format!("Z/{x}")).collect::<Vec<_>>().join(" + ")
    }
}

fn validate(file: &str) -> Result<Report> {
    let f = load(file)?;
    let c = f.complex()?;
    let r = c.validate();
    let human = format!("{}{}\n", header(&f), r);
    let json = json!({ "command": "validate", "name": f.name, "passed": r.passed(), "checks": r.checks });
    Ok(Report::new(human, json, r.passed()))
}

fn invariants(c: &DeltaComplex) -> Result<(i64, Degree, Value, String)> {
    let p = validated(&over_field(c)?)?;
    let e = p.euler()?;
    let (z, h) = (p.zeta()?, p.h()?);
    let human = format!(
        "zeta = {z}\nh = {}\nchi(HF) = {}  chi(reduced) = {}  chi(HF) - m = {}\n",
        deg(&h),
        e.chi_hf,
        e.chi_reduced,
        deg(&e.lambda_tilde)
    );
    let json = json!({
        "zeta": z,
        "h": deg(&h),
        "chi_hf": e.chi_hf,
        "chi_reduced": e.chi_reduced,
        "lambda_tilde": deg(&e.lambda_tilde),
    });
    Ok((z, h, json, human))
}

fn cohom(file: &str) -> Result<Report> {
    let f = load(file)?;
    let c = f.complex()?;
    let p = validated(&c)?;
    let field = c.coeff.is_field();
    let mut human = header(&f);
    let _ = writeln!(human, "{:>8}  {:>12}  {:>8}", "degree", "HF", "reduced");
    let mut rows = Vec::new();
    for r in p.support() {
        let q = c.abs_degree(r);
        let s = p.summary(r);
        let red = if field { Some(p.reduced_dim(r)) } else { None };
        let red_s = red.map_or("-".to_string(), |d| d.to_string());
        let _ = writeln!(human, "{:>8}  {:>12}  {:>8}", deg(&q), s.to_string(), red_s);
        rows.push(json!({ "degree": deg(&q), "hf": s.to_string(), "hf_summary": s, "reduced": red }));
    }
    if rows.is_empty() {
        let _ = writeln!(human, "{:>8}  {:>12}  {:>8}", "all", "0", "0");
    }
    let (_, _, inv, inv_h) = invariants(&c)?;
    if !field {
        human.push_str("invariants over Q:\n");
    }
    human.push_str(&inv_h);
    let json = json!({ "command": "cohom", "name": f.name, "degrees": rows, "invariants": inv });
    Ok(Report::new(human, json, true))
}

fn dims_table(p: &CohomologyPackage) -> BTreeMap<String, usize> {
    let c = p.complex();
    p.support().into_iter().map(|r| (deg(&c.abs_degree(r)), p.dim(r))).collect()
}

fn chambers(file: &str, to: &str, emit: Option<&Path>) -> Result<Report> {
    let f = load(file)?;
    let c = f.complex()?;
    let target = parse_rational(to)?;
    let m = c.chamber;
    let (lo, hi) = (m.min(target), m.max(target));
    if !c.coeff.is_field() {
        c.validate().into_result()?;
        let t = torsion_transport(&c, lo, hi)?;
        let mut human = header(&f);
        let _ = writeln!(human, "torsion under J: m1 = {}, m2 = {}, h over Q = {}", deg(&lo), deg(&hi), deg(&t.h0));
        let _ = writeln!(human, "{:>8}  {:>16}  {:>16}  {:>9}  {:>10}", "degree", "source", "target", "injective", "surjective");
        let mut rows = Vec::new();
        for d in &t.degrees {
            let (s, tg) = (torsion_group(&d.source_orders), torsion_group(&d.target_orders));
            let _ = writeln!(human, "{:>8}  {:>16}  {:>16}  {:>9}  {:>10}", deg(&d.q), s, tg, d.injective, d.surjective);
            rows.push(json!({ "degree": deg(&d.q), "source": s, "target": tg, "injective": d.injective, "surjective": d.surjective }));
        }
        let _ = writeln!(human, "consistent with h: {}", t.consistent());
        let json = json!({
            "command": "chambers", "name": f.name, "m1": deg(&lo), "m2": deg(&hi), "h0": deg(&t.h0),
            "torsion": rows, "consistent": t.consistent(),
        });
        return Ok(Report::new(human, json, t.consistent()));
    }
    let p = validated(&c)?;
    let q = derive_chamber(&p, target)?;
    let j = j_map(&p, lo, hi)?;
    let (e1, e2) = (p.euler()?, q.euler()?);
    let lambda_ok = e1.lambda_tilde == e2.lambda_tilde;
    let mut human = header(&f);
    let _ = writeln!(human, "chamber {} -> {}", deg(&m), deg(&target));
    let _ = writeln!(human, "{:>8}  {:>6}  {:>8}", "degree", "HF", "reduced");
    let mut rows = Vec::new();
    for r in q.support() {
        let d = q.complex().abs_degree(r);
        let _ = writeln!(human, "{:>8}  {:>6}  {:>8}", deg(&d), q.dim(r), q.reduced_dim(r));
        rows.push(json!({ "degree": deg(&d), "hf": q.dim(r), "reduced": q.reduced_dim(r) }));
    }
    let _ = writeln!(human, "J: HF(m={}) -> HF(m={})", deg(&lo), deg(&hi));
    let k = p.coeff().clone();
    let mut jrows = Vec::new();
    for d in &j.degrees {
        let (rk_ker, rk_im) = (rank(&d.kernel, &k), rank(&d.image, &k));
        let _ = writeln!(
            human,
            "{:>8}  {} -> {}  kernel {}  image {}  towers {}",
            deg(&d.q),
            d.dim_source,
            d.dim_target,
            rk_ker,
            rk_im,
            if d.kernel_matches_towers && d.image_matches_towers { "OK" } else { "FAIL" }
        );
        jrows.push(json!({
            "degree": deg(&d.q), "dim_source": d.dim_source, "dim_target": d.dim_target,
            "kernel": rk_ker, "image": rk_im,
            "kernel_matches_towers": d.kernel_matches_towers, "image_matches_towers": d.image_matches_towers,
        }));
    }
    let _ = writeln!(
        human,
        "chi(HF) - m: {} -> {}  {}",
        deg(&e1.lambda_tilde),
        deg(&e2.lambda_tilde),
        if lambda_ok { "OK" } else { "FAIL" }
    );
    if let Some(path) = emit {
        let mut out = f.clone();
        out.name = format!("{}_m{}", f.name, deg(&target).replace('/', "_"));
        out.cobordism = None;
        out.expected = None;
        out.set_complex(q.complex())?;
        write_file(path, &out.to_json())?;
        let _ = writeln!(human, "wrote {}", path.display());
    }
    let ok = lambda_ok && j.consistent();
    let json = json!({
        "command": "chambers", "name": f.name, "from": deg(&m), "to": deg(&target),
        "degrees": rows, "j": jrows, "lambda_tilde": [deg(&e1.lambda_tilde), deg(&e2.lambda_tilde)],
        "consistent": ok,
    });
    Ok(Report::new(human, json, ok))
}

fn equivariant(file: &str, window: Option<&[i64]>) -> Result<Report> {
    let f = load(file)?;
    let c = f.complex()?;
    let p = validated(&c)?;
    let g = equivariant_groups(&p)?;
    let mut human = header(&f);
    let _ = writeln!(human, "h = {}", deg(&g.h));
    let _ = writeln!(human, "HF-bar:   {}", g.over);
    let _ = writeln!(human, "HF-under: {}", g.under);
    let _ = writeln!(human, "reduced:  {}", g.hat);
    let _ = writeln!(human, "P:        {}", g.poly);
    let mut json = json!({
        "command": "equivariant", "name": f.name, "h": deg(&g.h),
        "over": g.over.to_string(), "under": g.under.to_string(),
        "reduced": g.hat.to_string(), "poly": g.poly.to_string(),
    });
    if let Some(w) = window {
        let two_m = c.chamber * 2;
        let frac = two_m - two_m.floor();
        let _ = writeln!(human, "{:>8}  {:>6}  {:>6}  {:>8}  {:>4}", "degree", "over", "under", "reduced", "P");
        let mut rows = Vec::new();
        for i in w[0]..=w[1] {
            let q = Degree::from_integer(i) + frac;
            let row = (g.over.dim(q), g.under.dim(q), g.hat.dim(q), g.poly.dim(q));
            let _ = writeln!(human, "{:>8}  {:>6}  {:>6}  {:>8}  {:>4}", deg(&q), row.0, row.1, row.2, row.3);
            rows.push(json!({ "degree": deg(&q), "over": row.0, "under": row.1, "reduced": row.2, "poly": row.3 }));
        }
        json["window"] = json!(rows);
    }
    Ok(Report::new(human, json, true))
}

fn fundseq(file: &str, window: (i64, i64)) -> Result<Report> {
    let f = load(file)?;
    let c = f.complex()?;
    let p = validated(&c)?;
    let s = fundamental_sequence(&p, window)?;
    let k = p.coeff().clone();
    let mut human = header(&f);
    let _ = writeln!(human, "limits realised by chambers {} and {}", deg(&s.chamber_lo), deg(&s.chamber_hi));
    let _ = writeln!(
        human,
        "{:>8}  {:>6}  {:>6}  {:>4}  {:>6}  {:>6}  {:>7}",
        "degree", "under", "over", "P", "rk J", "rk D", "rk D'"
    );
    let mut rows = Vec::new();
    for d in &s.degrees {
        let (rj, rd, rdp) = (rank(&d.j, &k), rank(&d.d, &k), rank(&d.d_prime, &k));
        let _ = writeln!(
            human,
            "{:>8}  {:>6}  {:>6}  {:>4}  {:>6}  {:>6}  {:>7}",
            deg(&d.q),
            d.dim_under,
            d.dim_over,
            d.dim_poly,
            rj,
            rd,
            rdp
        );
        rows.push(json!({
            "degree": deg(&d.q), "under": d.dim_under, "over": d.dim_over, "poly": d.dim_poly,
            "rank_j": rj, "rank_d": rd, "rank_d_prime": rdp,
        }));
    }
    for fl in &s.failures {
        let _ = writeln!(human, "not exact at {} in degree {}", fl.term, fl.degree);
    }
    let h_ok = s.h_matches(window);
    let lowest = s.lowest_d.map(|d| deg(&d));
    let _ = writeln!(human, "exact: {}", if s.exact() { "yes" } else { "no" });
    let _ = writeln!(
        human,
        "lowest nonzero D: {}  (2h = {})  {}",
        lowest.clone().unwrap_or_else(|| "none in window".into()),
        deg(&(s.groups.h * 2)),
        if h_ok { "OK" } else { "FAIL" }
    );
    let ok = s.exact() && h_ok;
    let json = json!({
        "command": "fundseq", "name": f.name, "window": [window.0, window.1],
        "degrees": rows, "failures": s.failures, "exact": s.exact(),
        "lowest_d": lowest, "two_h": deg(&(s.groups.h * 2)), "h_matches": h_ok,
    });
    Ok(Report::new(human, json, ok))
}

fn hinv(file: &str, p: u64) -> Result<Report> {
    let f = load(file)?;
    let k = Coefficients::field_of_characteristic(p)?;
    let c = f.complex()?.with_coefficients(&k)?;
    let pack = validated(&c)?;
    let h = h_invariant(&pack)?;
    let z = pack.zeta()?;
    let human = format!("{}h_{p} = {}\nzeta = {z}\n", header(&f), deg(&h));
    let json = json!({ "command": "hinv", "name": f.name, "characteristic": p, "h": deg(&h), "zeta": z });
    Ok(Report::new(human, json, true))
}

fn dual(file: &str, emit: Option<&Path>) -> Result<Report> {
    let f = load(file)?;
    let c = f.complex()?;
    let d = c.dualize();
    let (z, h, _, _) = invariants(&c)?;
    let (zd, hd, _, _) = invariants(&d)?;
    let ok = zd == -z && hd == -h;
    let mut human = header(&f);
    let _ = writeln!(human, "dual chamber m = {}", deg(&d.chamber));
    let _ = writeln!(human, "zeta: {z} -> {zd}\nh: {} -> {}", deg(&h), deg(&hd));
    let _ = writeln!(human, "sign change: {}", if ok { "OK" } else { "FAIL" });
    if let Some(path) = emit {
        let mut out = InstanceFile::new(&format!("{}_dual", f.name), &f.origin, &d)?;
        out.expected = Some(json!({ "zeta": zd, "h": deg(&hd) }));
        write_file(path, &out.to_json())?;
        let _ = writeln!(human, "wrote {}", path.display());
    }
    let json = json!({
        "command": "dual", "name": f.name, "zeta": z, "h": deg(&h),
        "dual_zeta": zd, "dual_h": deg(&hd), "sign_change": ok,
    });
    Ok(Report::new(human, json, ok))
}

fn need_cobordism(f: &InstanceFile, k: &Coefficients) -> Result<CobordismData> {
    f.cobordism(k)?
        .ok_or_else(|| Error::InvalidInput(format!("{} has no cobordism", f.name)))
}

fn cobord_validate(file: &str) -> Result<Report> {
    let f = load(file)?;
    let w = need_cobordism(&f, &f.coefficients)?;
    let r = validate_cobordism(&w);
    let mut human = header(&f);
    let _ = writeln!(human, "d = {}  k = {}  tower rule: {:?}", r.d, r.k, r.tower_rule);
    for ch in &r.checks {
        let _ = writeln!(human, "{:<36} {}", ch.name, if ch.ok { "OK" } else { "FAIL" });
        for d in ch.detail.iter().take(8) {
            let _ = writeln!(human, "    {d}");
        }
    }
    let mut json = json!({ "command": "cobord-validate", "name": f.name, "relations": r });
    let mut ok = r.passed();
    let mut code = None;
    if w.coeff().is_field() && ok {
        match induced_maps(&w) {
            Ok(im) => {
                for ch in &im.checks {
                    let _ = writeln!(human, "{:<36} {}", ch.name, if ch.ok { "OK" } else { "FAIL" });
                }
                let _ = writeln!(human, "P(W) {}", if im.p_nonzero { "is the shift" } else { "vanishes" });
                json["induced"] = json!({ "checks": im.checks, "p_nonzero": im.p_nonzero, "shift": deg(&im.shift) });
                ok &= im.passed();
            }
            Err(e @ Error::Unsupported(_)) => {
                let _ = writeln!(human, "induced maps: {e}");
                json["induced"] = json!({ "unsupported": e.to_string() });
                code = Some(EXIT_UNSUPPORTED);
            }
            Err(e) => return Err(e),
        }
    }
    json["passed"] = json!(ok);
    let mut rep = Report::new(human, json, ok);
    if ok {
        rep.code = code;
    }
    Ok(rep)
}

fn lefschetz_cmd(file: &str) -> Result<Report> {
    let f = load(file)?;
    let mut human = header(&f);
    if let Some(e) = f.endo()? {
        let l = lefschetz(&e);
        let _ = writeln!(human, "L(f) = tr f0 - tr f1 = {}", fmt_scalar(&l));
        let json = json!({ "command": "lefschetz", "name": f.name, "source": "endo", "lefschetz": fmt_scalar(&l) });
        return Ok(Report::new(human, json, true));
    }
    let k = over_field(&f.complex()?)?.coeff;
    let w = need_cobordism(&f, &k)?;
    let d = w.d();
    if !(d / 2).is_integer() || d < Rational64::from_integer(0) {
        return Err(Error::InvalidInput(format!("d = {} is not 2n with n >= 0", deg(&d))));
    }
    let n = (d / 2).to_integer() as u32;
    let e = sw_endo(&w, n)?;
    let l = lefschetz(&e);
    let _ = writeln!(human, "L(u^{n} psi-hat) = {}", fmt_scalar(&l));
    let json = json!({ "command": "lefschetz", "name": f.name, "source": "cobordism", "n": n, "lefschetz": fmt_scalar(&l) });
    Ok(Report::new(human, json, true))
}

fn sw(file: &str, n: u32) -> Result<Report> {
    let f = load(file)?;
    let c = over_field(&f.complex()?)?;
    let w = match f.cobordism(&c.coeff)? {
        Some(w) => w,
        None => CobordismData::identity(&c),
    };
    let t = sw_trace(&w, n)?;
    let human = format!("{}SW = L(u^{n} psi-hat) = {}\n", header(&f), fmt_scalar(&t));
    let json = json!({ "command": "sw", "name": f.name, "n": n, "sw": fmt_scalar(&t) });
    Ok(Report::new(human, json, true))
}

fn froyshov(
    file: Option<&str>,
    hs: &[String],
    b2: Option<u32>,
    sigma: Option<i64>,
    c1sq: Option<&str>,
) -> Result<Report> {
    let spec = match file {
        Some(file) => {
            let f = load(file)?;
            let c = f.complex()?;
            let h_default = || -> Result<Rational64> { Ok(invariants(&c)?.1) };
            f.boundary(h_default)?
                .ok_or_else(|| Error::InvalidInput(format!("{} has no boundary data", f.name)))?
        }
        None => {
            let b2 = b2.ok_or_else(|| Error::InvalidInput("--b2 is required without a file".into()))?;
            let components = hs
                .iter()
                .enumerate()
                .map(|(i, h)| Ok((format!("Y{}", i + 1), parse_rational(h)?)))
                .collect::<Result<Vec<_>>>()?;
            BoundarySpec {
                components,
                b2,
                sigma: sigma.unwrap_or(-i64::from(b2)),
                c1sq: c1sq.map(parse_rational).transpose()?.unwrap_or(Rational64::from_integer(0)),
            }
        }
    };
    let r = froyshov_check(&spec)?;
    let mut human = String::new();
    for (name, h) in &spec.components {
        let _ = writeln!(human, "h({name}) = {}", deg(h));
    }
    let _ = writeln!(human, "b2 = {}  sigma = {}  c1^2 = {}", spec.b2, spec.sigma, deg(&spec.c1sq));
    let _ = writeln!(
        human,
        "-sum h = {} {} {} = (b2 + c1^2)/8",
        deg(&r.lhs),
        if r.satisfied { ">=" } else { "<" },
        deg(&r.rhs)
    );
    let equality = r.lhs == r.rhs;
    if equality {
        let _ = writeln!(human, "equality holds");
    }
    let json = json!({
        "command": "froyshov",
        "components": spec.components.iter().map(|(n, h)| json!({ "name": n, "h": deg(h) })).collect::<Vec<_>>(),
        "b2": spec.b2, "sigma": spec.sigma, "c1sq": deg(&spec.c1sq),
        "lhs": deg(&r.lhs), "rhs": deg(&r.rhs), "satisfied": r.satisfied, "equality": equality,
    });
    Ok(Report::new(human, json, r.satisfied))
}

fn lens(q: i64) -> Result<Report> {
    let t = lens_h_table(q)?;
    let mut human = format!("L({q},1): h = ((q - 2j)^2/q - 1)/8\n{:>4}  {:>8}\n", "j", "h");
    for (j, h) in t.iter().enumerate() {
        let _ = writeln!(human, "{j:>4}  {:>8}", deg(h));
    }
    let json = json!({ "command": "lens", "q": q, "h": t.iter().map(deg).collect::<Vec<_>>() });
    Ok(Report::new(human, json, true))
}

fn read_gram(spec: &str) -> Result<Vec<Vec<i64>>> {
    if spec == "e8" {
        return Ok(e8_gram());
    }
    if let Some(n) = spec.strip_prefix("diag:") {
        let n: usize = n.parse().map_err(|_| Error::Parse(format!("bad lattice size {n:?}")))?;
        return Ok(diagonal_gram(n));
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let g = v.get("gram").cloned().unwrap_or(v);
    serde_json::from_value(g).map_err(|e| Error::Parse(format!("gram matrix: {e}")))
}

fn obstruct(lattice: &str, bound: i64) -> Result<Report> {
    let g = read_gram(lattice)?;
    let r = char_vector_max(&g, bound)?;
    let witness = r.witness.iter().map(i64::to_string).collect::<Vec<_>>().join(", ");
    let human = format!(
        "lattice {lattice} (rank {})\nmax (n + c^2)/8 = {}\nwitness c = ({witness})  c^2 = {}\nsearch box |c_i| <= {}{}\n",
        g.len(),
        deg(&r.value),
        r.norm,
        r.bound,
        if r.exhaustive { " (exhaustive)" } else { "" }
    );
    let json = json!({
        "command": "obstruct", "lattice": lattice, "rank": g.len(), "value": deg(&r.value),
        "witness": r.witness, "norm": r.norm, "bound": r.bound, "exhaustive": r.exhaustive,
    });
    Ok(Report::new(human, json, true))
}

fn parse_hb(s: &str) -> Result<BTreeMap<i64, usize>> {
    let mut out = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (q, d) = part.split_once(':').ok_or_else(|| Error::Parse(format!("expected q:dim, got {part:?}")))?;
        let q: i64 = q.trim().parse().map_err(|_| Error::Parse(format!("bad degree {q:?}")))?;
        let d: usize = d.trim().parse().map_err(|_| Error::Parse(format!("bad dimension {d:?}")))?;
        out.insert(q, d);
    }
    Ok(out)
}

fn oracle_mv(n: Option<usize>, hb: &str, window: Option<&[i64]>, model: Option<&str>) -> Result<Report> {
    let k = Coefficients::Rationals;
    let default_window = |n: usize| (0, 2 * n as i64 + 6);
    let win = |n: usize| window.map_or(default_window(n), |w| (w[0], w[1]));
    if let Some(file) = model {
        let f = load(file)?;
        let m = f.morse()?.ok_or_else(|| Error::InvalidInput(format!("{} has no Morse model", f.name)))?;
        let w = win(m.n as usize);
        let r = morse_cross_check(&m, &k, w)?;
        let mut human = format!("Morse model {} (n = {})\n{:>6}  {:>6}  {:>6}\n", f.name, m.n, "degree", "delta", "splice");
        let sd = r.splice.dims();
        for (q, d) in &r.delta_side {
            let _ = writeln!(human, "{q:>6}  {d:>6}  {:>6}", sd.get(q).copied().unwrap_or(0));
        }
        let ranges = r.splice.isomorphism_ranges_hold();
        let _ = writeln!(human, "agree: {}  isomorphism ranges: {}", r.agree, if ranges { "OK" } else { "FAIL" });
        let ok = r.agree && ranges;
        let json = json!({ "command": "oracle-mv", "name": f.name, "check": r, "ranges_hold": ranges, "passed": ok });
        return Ok(Report::new(human, json, ok));
    }
    let n = n.ok_or_else(|| Error::InvalidInput("--n or --model is required".into()))?;
    let s = mv_splice(n, &parse_hb(hb)?, &BTreeMap::new(), win(n), &k)?;
    let mut human = format!(
        "n = {n}, CP^inf truncated at CP^{}\n{:>6}  {:>4}  {:>6}  {:>8}  {:>5}  {:>9}  {:>10}\n",
        s.truncation, "degree", "B*", "CP^inf", "CP^(n-1)", "H_T", "first iso", "second iso"
    );
    for d in &s.degrees {
        let _ = writeln!(
            human,
            "{:>6}  {:>4}  {:>6}  {:>8}  {:>5}  {:>9}  {:>10}",
            d.q, d.dim_b_star, d.dim_cp_infinity, d.dim_cp_n_minus_1, d.dim_equivariant, d.first_iso, d.second_iso
        );
    }
    let ok = s.isomorphism_ranges_hold();
    let _ = writeln!(human, "isomorphism ranges: {}", if ok { "OK" } else { "FAIL" });
    let json = json!({ "command": "oracle-mv", "splice": s, "ranges_hold": ok });
    Ok(Report::new(human, json, ok))
}

fn oracle_specflow(file: Option<&str>, berger: Option<u32>) -> Result<Report> {
    let (name, fam, barrier) = match (file, berger) {
        (_, Some(n)) => (format!("berger({n})"), berger_family(n, 2), None),
        (Some(file), None) => {
            let f = load(file)?;
            let (fam, barrier) = f
                .spectral_family()?
                .ok_or_else(|| Error::InvalidInput(format!("{} has no spectral flow data", f.name)))?;
            (f.name, fam, barrier)
        }
        (None, None) => return Err(Error::InvalidInput("a file or --berger N is required".into())),
    };
    let s = spectral_flow(&fam, barrier.as_ref())?;
    let mut human = format!("{name}: {} curves\nup = {}  down = {}  SF = {}\n", fam.curves.len(), s.up, s.down, s.sf);
    let mut ok = true;
    if let Some(b) = &s.barrier {
        let _ = writeln!(human, "below barrier: {} at start, {} at end  {}", b.n_a, b.n_b, if b.holds { "OK" } else { "FAIL" });
        ok = b.holds;
    }
    let json = json!({ "command": "oracle-specflow", "name": name, "flow": s });
    Ok(Report::new(human, json, ok))
}

fn gen(seed: u64, size: usize, p: u64, emit: Option<&Path>) -> Result<Report> {
    let k = Coefficients::field_of_characteristic(p)?;
    let params = RandomParams { max_generators: size, coeff: k, ..RandomParams::default() };
    let inst = generate_random_delta(seed, &params)?;
    let c = &inst.complex;
    let pack = validated(c)?;
    let (z, h) = (pack.zeta()?, pack.h()?);
    let ok = z == inst.zeta && h == inst.h;
    let mut human = format!(
        "seed {seed}  [{}]  chamber m = {}  generators: {}\n",
        c.coeff,
        deg(&c.chamber),
        c.len()
    );
    let _ = writeln!(human, "zeta = {z} (constructed {})  h = {} (constructed {})", inst.zeta, deg(&h), deg(&inst.h));
    let expected = json!({
        "zeta": inst.zeta,
        "h": deg(&inst.h),
        "hf_dims": inst.hf_dims.iter().map(|(r, d)| (deg(&c.abs_degree(*r)), *d)).collect::<BTreeMap<_, _>>(),
        "reduced_dims": inst.reduced_dims.iter().map(|(r, d)| (deg(&c.abs_degree(*r)), *d)).collect::<BTreeMap<_, _>>(),
    });
    if let Some(path) = emit {
        let mut out = InstanceFile::new(&format!("random_{seed}"), "generated", c)?;
        out.expected = Some(expected.clone());
        write_file(path, &out.to_json())?;
        let _ = writeln!(human, "wrote {}", path.display());
    }
    let json = json!({
        "command": "gen", "seed": seed, "characteristic": p, "generators": c.len(),
        "chamber": deg(&c.chamber), "expected": expected, "zeta": z, "h": deg(&h), "matches": ok,
        "dims": dims_table(&pack),
    });
    Ok(Report::new(human, json, ok))
}
