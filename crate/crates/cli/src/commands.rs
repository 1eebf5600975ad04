use std::fs;
use std::io::Write;

use crich::counterexample;
use crich::jcr::{self, Check, Witness};
use crich::largeness::{self, LargenessReport, LargenessWitness, REPORT_HEADER};
use crich::product::{self, ProductBounds, ProductError};
use crich::ramsey;
use crich::sequences;
use crich::{ElemId, ElemSet, PsgInstance, SearchOutcome, SeqPrefix};

use crate::instance::{load_instance_file, InstanceFile};
use crate::report::{Emitter, Record};
use crate::{
    CheckArgs, Cli, CliError, Command, CounterexampleArgs, CrArgs, DaggerArgs, DdaggerArgs,
    NotionArg, ProductArgs, RamseyArgs,
};

pub(crate) fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let mut em = Emitter::new(out, cli.machine);
    match &cli.command {
        Command::Check(a) => check(&load(cli, "check")?, a, &mut em),
        Command::Cr(a) => cr(&load(cli, "cr")?, a, &mut em),
        Command::Dagger(a) => dagger(&load(cli, "dagger")?, a, &mut em),
        Command::Ddagger(a) => ddagger(&load(cli, "ddagger")?, a, &mut em),
        Command::Ramsey(a) => ramsey_cmd(a, &mut em),
        Command::Counterexample(a) => counterexample_cmd(a, &mut em),
        Command::Product(a) => product_cmd(a, &mut em),
    }
}

fn load(cli: &Cli, cmd: &'static str) -> Result<InstanceFile, CliError> {
    let path = cli
        .instance
        .as_ref()
        .ok_or(CliError::MissingInstance(cmd))?;
    Ok(load_instance_file(path)?)
}

fn set_ids<'a>(f: &'a InstanceFile, name: &str) -> Result<&'a [ElemId], CliError> {
    f.set(name)
        .ok_or_else(|| CliError::UnknownSet(name.to_string()))
}

fn elemset(f: &InstanceFile, name: &str) -> Result<ElemSet, CliError> {
    f.set_as_elemset(name)
        .ok_or_else(|| CliError::UnknownSet(name.to_string()))
}

fn pool<'a>(f: &'a InstanceFile, name: &str) -> Result<&'a [SeqPrefix], CliError> {
    match f.pool(name) {
        Some(p) if !p.is_empty() => Ok(p),
        Some(_) => Err(CliError::Invalid(format!("pool `{name}` is empty"))),
        None => Err(CliError::UnknownPool(name.to_string())),
    }
}

fn nonempty_l<'a>(f: &'a InstanceFile, name: &str) -> Result<&'a [ElemId], CliError> {
    let l = set_ids(f, name)?;
    if l.is_empty() {
        return Err(CliError::Invalid(format!("L = `{name}` is empty")));
    }
    Ok(l)
}

/// `r_max` capped at the shortest pool member.
fn effective_rmax(pool: &[SeqPrefix], requested: usize) -> usize {
    pool.iter()
        .map(|f| f.len())
        .min()
        .unwrap_or(0)
        .min(requested)
}

fn verify(
    psg: &PsgInstance,
    a: &ElemSet,
    l: &[ElemId],
    fam: &[SeqPrefix],
    w: &Witness,
) -> Result<String, CliError> {
    Ok(match jcr::witness_check(psg, a, l, fam, w)? {
        Check::Ok => "ok".to_string(),
        Check::Fails { member, reason } => format!("fails(member={member},{reason:?})"),
    })
}

fn members(idx: &[usize]) -> String {
    let parts: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn pick(pool: &[SeqPrefix], idx: &[usize]) -> Vec<SeqPrefix> {
    idx.iter().map(|&i| pool[i].clone()).collect()
}

fn outcome_detail<T>(o: &SearchOutcome<T>) -> String {
    match o {
        SearchOutcome::Found(_) => "-".to_string(),
        SearchOutcome::ProvenEmpty(p) => p.to_string(),
        SearchOutcome::BoundExhausted(b) => b.to_string(),
    }
}

// ---------------------------------------------------------------------------

fn largeness_record(psg: &PsgInstance, set: &str, r: &LargenessReport) -> Record {
    let witness = match &r.witness {
        LargenessWitness::None => "-".to_string(),
        LargenessWitness::Translations(m) => format!("families:{}", m.len()),
        LargenessWitness::Blocker(f) => format!("blocker:{}", psg.show_all(f)),
        LargenessWitness::Cover(g) => format!("cover:{}", psg.show_all(g)),
        LargenessWitness::CoverAndTranslations(g, m) => {
            format!("cover:{};families:{}", psg.show_all(g), m.len())
        }
        LargenessWitness::Prefix(f) => format!("prefix:{}", f.show(psg)),
    };
    Record::new("check")
        .kv("notion", r.notion)
        .kv("set", set)
        .kv("verdict", r.verdict)
        .kv("vacuous", r.vacuous)
        .kv("skipped", r.skipped)
        .bounds(&r.bounds)
        .kv("witness", witness)
        .kv("label", REPORT_HEADER)
}

fn check(f: &InstanceFile, a: &CheckArgs, em: &mut Emitter) -> Result<(), CliError> {
    let psg = &f.psg;
    let set = elemset(f, &a.set)?;
    for &n in &a.notion {
        let rep = match n {
            NotionArg::Thick => largeness::is_thick(psg, &set, a.b),
            NotionArg::Syndetic => largeness::is_syndetic(psg, &set, a.g),
            NotionArg::Ps => largeness::is_piecewise_syndetic(psg, &set, a.g, a.b),
            NotionArg::Cps => largeness::is_c_piecewise_syndetic(psg, &set, a.h, a.t),
            NotionArg::Ipr => largeness::ip_r_report(psg, &set, a.r),
            NotionArg::Iprstar => largeness::is_ip_r_star(psg, &set, a.r),
        };
        em.emit(&largeness_record(psg, &a.set, &rep))?;
    }
    Ok(())
}

fn cr(f: &InstanceFile, a: &CrArgs, em: &mut Emitter) -> Result<(), CliError> {
    let psg = &f.psg;
    let l = nonempty_l(f, &a.l)?;
    let p = pool(f, &a.pool)?;
    let (set_name, target) = match &a.set {
        Some(name) => (name.as_str(), elemset(f, name)?),
        None => ("S", ElemSet::full(psg.len())),
    };
    let rmax = effective_rmax(p, a.rmax);
    let res = jcr::k_cr_radius(psg, &target, a.k, l, p, a.mmax, rmax)?;
    for (idx, w) in &res.per_family {
        em.emit(
            &Record::new("cr.family")
                .kv("members", members(idx))
                .kv("witness", w.show(psg))
                .kv("verify", verify(psg, &target, l, &pick(p, idx), w)?),
        )?;
    }
    let mut rec = Record::new("cr")
        .kv(
            "radius",
            res.radius.map_or("none".to_string(), |r| r.to_string()),
        )
        .kv("set", set_name)
        .kv("L", &a.l)
        .kv("pool_id", &a.pool)
        .bounds(&res.bounds);
    if let Some((idx, o)) = &res.failure {
        rec = rec
            .kv("failed_members", members(idx))
            .kv("outcome", o.label())
            .kv("detail", outcome_detail(o));
    }
    em.emit(&rec)?;
    Ok(())
}

fn dagger(f: &InstanceFile, a: &DaggerArgs, em: &mut Emitter) -> Result<(), CliError> {
    let psg = &f.psg;
    let l = nonempty_l(f, &a.l)?;
    let p = pool(f, &a.pool)?;
    let rmax = effective_rmax(p, a.rmax);
    let res = jcr::dagger_radius(psg, a.k, l, p, rmax)?;
    let all = ElemSet::full(psg.len());
    for (idx, t) in &res.indices {
        let fam = pick(p, idx);
        let w = jcr::dagger_to_witness(psg, l, &fam, *t)?;
        em.emit(
            &Record::new("dagger.family")
                .kv("members", members(idx))
                .kv("t", t)
                .kv("witness", w.show(psg))
                .kv("verify", verify(psg, &all, l, &fam, &w)?),
        )?;
    }
    em.emit(
        &Record::new("dagger")
            .kv(
                "radius",
                res.radius.map_or("none".to_string(), |r| r.to_string()),
            )
            .kv(
                "guaranteed",
                res.guaranteed.map_or("-".to_string(), |g| g.to_string()),
            )
            .kv("L", &a.l)
            .kv("pool_id", &a.pool)
            .bounds(&res.bounds),
    )?;
    Ok(())
}

fn ddagger(f: &InstanceFile, a: &DdaggerArgs, em: &mut Emitter) -> Result<(), CliError> {
    let psg = &f.psg;
    let l = nonempty_l(f, &a.l)?;
    let p = pool(f, &a.pool)?;
    let rmax = effective_rmax(p, a.rmax);
    let found = jcr::has_ddagger(psg, l, p, rmax)?;
    let mut rec = Record::new("ddagger")
        .kv("r", found.map_or("none".to_string(), |r| r.to_string()))
        .kv("L", &a.l)
        .kv("pool_id", &a.pool)
        .kv("pool", p.len())
        .kv("r_max", rmax);
    if let Some(r) = found {
        let w = jcr::dagger_to_witness(psg, l, p, r)?;
        rec = rec
            .kv("witness", w.show(psg))
            .kv("verify", verify(psg, &ElemSet::full(psg.len()), l, p, &w)?);
    }
    em.emit(&rec)?;
    Ok(())
}

fn ramsey_cmd(a: &RamseyArgs, em: &mut Emitter) -> Result<(), CliError> {
    let res = ramsey::fu_ramsey_number(a.s, a.k, a.rmax)?;
    let certificate = match (&a.emit_certificate, &res.good) {
        (Some(path), Some(c)) => {
            let mut text = c.certificate_lines().join("\n");
            text.push('\n');
            fs::write(path, text)?;
            path.display().to_string()
        }
        _ => "-".to_string(),
    };
    em.emit(
        &Record::new("ramsey")
            .kv("r", res.r.map_or("none".to_string(), |r| r.to_string()))
            .bounds(&res.bounds)
            .kv(
                "good_r",
                res.good
                    .as_ref()
                    .map_or("-".to_string(), |c| c.r().to_string()),
            )
            .kv(
                "nodes",
                res.nodes.map_or("-".to_string(), |n| n.to_string()),
            )
            .kv("certificate", certificate),
    )?;
    Ok(())
}

fn counterexample_cmd(a: &CounterexampleArgs, em: &mut Emitter) -> Result<(), CliError> {
    let rep = counterexample::snotcr_verify(a.t, a.mmax)?;
    for (r, o) in &rep.per_radius {
        em.emit(
            &Record::new("counterexample")
                .kv("r", r)
                .kv("family", format!("f_{r}"))
                .kv("L", "{{1}}")
                .kv("outcome", o.label())
                .kv("detail", outcome_detail(o))
                .kv("m_max", a.mmax),
        )?;
    }
    em.emit(
        &Record::new("counterexample.summary")
            .kv("T", rep.depth)
            .kv("universe", rep.universe)
            .kv("all_proven_empty", rep.all_proven_empty())
            .kv("sigma_min_above_one", rep.sigma_min_above_one)
            .kv("openings_below_one", rep.openings_below_one)
            .kv("m_max", a.mmax),
    )?;
    Ok(())
}

fn product_cmd(a: &ProductArgs, em: &mut Emitter) -> Result<(), CliError> {
    let lf = load_instance_file(&a.left)?;
    let rf = load_instance_file(&a.right)?;
    let (s, t) = (&lf.psg, &rf.psg);
    let set_a = elemset(&lf, &a.a)?;
    let set_b = elemset(&rf, &a.b)?;
    let l1 = nonempty_l(&lf, &a.l)?;
    let l2 = nonempty_l(&rf, &a.l)?;
    let (p1, p2) = (pool(&lf, &a.pool)?, pool(&rf, &a.pool)?);
    if p1.len() != p2.len() {
        return Err(CliError::Invalid(format!(
            "pool `{}` has {} members on the left and {} on the right",
            a.pool,
            p1.len(),
            p2.len()
        )));
    }
    let prod = PsgInstance::product(s, t)?;
    let l: Vec<ElemId> = l1
        .iter()
        .flat_map(|&x| l2.iter().map(move |&y| (x, y)))
        .map(|(x, y)| prod.pair_id(x, y))
        .collect();
    let fam: Vec<SeqPrefix> = p1
        .iter()
        .zip(p2)
        .map(|(f, g)| {
            let n = f.len().min(g.len());
            sequences::pair_prefixes(&prod, &f.truncate(n), &g.truncate(n))
        })
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    let bounds = ProductBounds {
        m_max: a.mmax,
        r_max: a.rmax,
        q_max: a.qmax,
    };
    let pw = match product::product_cr_witness(&prod, &set_a, &set_b, a.k, &l, &fam, bounds) {
        Ok(pw) => pw,
        Err(e @ (ProductError::NoCommonR { .. } | ProductError::RadiusUnavailable(_))) => {
            em.emit(
                &Record::new("product")
                    .kv("outcome", "BoundExhausted")
                    .kv("reason", e)
                    .kv("k", a.k)
                    .kv("m_max", a.mmax)
                    .kv("r_max", a.rmax)
                    .kv("q_max", a.qmax)
                    .kv("pool_id", &a.pool),
            )?;
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    let t_idx = pw.witness.t.clone();
    let trunc = |p: &[SeqPrefix]| -> Vec<SeqPrefix> {
        fam.iter()
            .zip(p)
            .map(|(h, f)| f.truncate(h.len()))
            .collect()
    };
    let (g, h) = (trunc(p1), trunc(p2));
    let lw = Witness::new(pw.left.clone(), t_idx.clone())?;
    let rw = Witness::new(pw.right.clone(), t_idx.clone())?;
    em.emit(
        &Record::new("product.left")
            .kv("instance", s.describe())
            .kv("witness", lw.show(s))
            .kv("verify", verify(s, &set_a, l1, &g, &lw)?),
    )?;
    em.emit(
        &Record::new("product.right")
            .kv("instance", t.describe())
            .kv("witness", rw.show(t))
            .kv("verify", verify(t, &set_b, l2, &h, &rw)?),
    )?;
    let (sig1, sig2) = (s.sigma(l1)?, t.sigma(l2)?);
    let ab = prod.product_set(&set_a, &set_b);
    let values: Vec<Option<ElemId>> = fam.iter().map(|f| pw.witness.product(&prod, f)).collect();
    let in_ab = values.iter().all(|v| v.is_some_and(|v| ab.contains(v)));
    let in_sig = values.iter().all(|v| {
        v.is_some_and(|v| {
            let (x, y) = prod.unpair(v);
            sig1.contains(x) && sig2.contains(y)
        })
    });
    em.emit(
        &Record::new("product")
            .kv("outcome", "Found")
            .kv("witness", pw.witness.show(&prod))
            .kv("verify", verify(&prod, &ab, &l, &fam, &pw.witness)?)
            .kv("in_AxB", in_ab)
            .kv("in_sigma_L1xsigma_L2", in_sig)
            .kv("u", pw.u)
            .kv("v", pw.v)
            .bounds(&pw.bounds)
            .kv("pool_id", &a.pool),
    )?;
    Ok(())
}
