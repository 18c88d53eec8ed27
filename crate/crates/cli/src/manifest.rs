//! INI manifests: `[chart]`, `[chart.NAME]`, `[form.NAME]`, `[field.NAME]`,
//! `[function.NAME]`, `[map.NAME]`, `[connection.NAME]`, `[metric.NAME]`,
//! `[lie]`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use asympl::exterior::{KForm, MapExpr, VecField};
use asympl::liealg::LieAlgebraData;
use asympl::tangent::{NonlinearConnection, TangentChart};
use asympl::{Chart, Expr, Q};
use ini::Ini;

/// An object value with the chart it lives on (`None`: default chart).
#[derive(Clone, Debug)]
pub struct Item {
    pub chart: Option<String>,
    pub value: String,
}

#[derive(Clone, Debug)]
pub struct MapItem {
    pub source: Option<String>,
    pub target: Option<String>,
    pub images: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct ConnectionItem {
    pub base: Option<String>,
    /// `(j, i, expr)` for `t^j_i`, zero-based.
    pub entries: Vec<(usize, usize, String)>,
}

#[derive(Clone, Debug, Default)]
pub struct LieItem {
    pub dim: usize,
    pub entries: Vec<((usize, usize, usize), String)>,
    pub gamma: Option<String>,
    pub xi: Option<String>,
}

#[derive(Debug, Default)]
pub struct Manifest {
    charts: BTreeMap<String, Chart>,
    default_chart: Option<String>,
    pub forms: BTreeMap<String, Item>,
    pub fields: BTreeMap<String, Item>,
    pub functions: BTreeMap<String, Item>,
    pub maps: BTreeMap<String, MapItem>,
    pub connections: BTreeMap<String, ConnectionItem>,
    pub metrics: BTreeMap<String, String>,
    pub lie: Option<LieItem>,
}

/// Splits on `sep` outside parentheses, trimming pieces and dropping empties.
pub fn split_top(s: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if ch == sep && depth == 0 {
            out.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(ch);
        }
    }
    out.push(cur.trim().to_string());
    out.retain(|p| !p.is_empty());
    out
}

pub fn parse_rational(s: &str) -> Result<Q> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    compact
        .parse::<Q>()
        .map_err(|_| anyhow!("`{}` is not a rational number", s.trim()))
}

/// `a, b; c, d` as rows of strings.
pub fn parse_rows(s: &str) -> Vec<Vec<String>> {
    split_top(s, ';').iter().map(|r| split_top(r, ',')).collect()
}

/// `c3_12` (or `c10_1_12` for multi-digit indices) as zero-based `(2, 0, 1)`.
fn parse_structure_key(key: &str) -> Option<(usize, usize, usize)> {
    let rest = key.strip_prefix('c')?;
    let (i, jk) = rest.split_once('_')?;
    let i: usize = i.parse().ok()?;
    let (j, k): (usize, usize) = if jk.len() == 2 {
        (jk[..1].parse().ok()?, jk[1..].parse().ok()?)
    } else {
        let (j, k) = jk.split_once('_')?;
        (j.parse().ok()?, k.parse().ok()?)
    };
    (i >= 1 && j >= 1 && k >= 1).then(|| (i - 1, j - 1, k - 1))
}

/// `t1_2` as zero-based `(0, 1)`.
fn parse_connection_key(key: &str) -> Option<(usize, usize)> {
    let (j, i) = key.strip_prefix('t')?.split_once('_')?;
    let (j, i): (usize, usize) = (j.parse().ok()?, i.parse().ok()?);
    (j >= 1 && i >= 1).then(|| (j - 1, i - 1))
}

fn chart_from_section(name: &str, props: &ini::Properties) -> Result<Chart> {
    let coords = split_top(props.get("coords").ok_or_else(|| anyhow!("chart `{name}` needs `coords`"))?, ',');
    let params = props.get("params").map(|p| split_top(p, ',')).unwrap_or_default();
    let mut chart = Chart::with_params(name, &coords, &params)?;
    if let Some(d) = props.get("domain") {
        chart = chart.with_domain(d)?;
    }
    if let Some(s) = props.get("seed") {
        chart = chart.with_seed(s.trim().parse().with_context(|| format!("bad seed `{s}`"))?);
    }
    Ok(chart)
}

fn item(props: &ini::Properties, what: &str) -> Result<Item> {
    Ok(Item {
        chart: props.get("chart").map(|s| s.trim().to_string()),
        value: props
            .get("value")
            .ok_or_else(|| anyhow!("{what} needs `value`"))?
            .trim()
            .to_string(),
    })
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Manifest> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Manifest::parse(&text).with_context(|| format!("in manifest {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Manifest> {
        let ini = Ini::load_from_str_noescape(text).map_err(|e| anyhow!("{e}"))?;
        let mut m = Manifest::default();
        let mut seen = BTreeSet::new();
        for (section, props) in ini.iter() {
            let Some(section) = section else {
                if props.iter().next().is_some() {
                    bail!("keys outside a section");
                }
                continue;
            };
            if !seen.insert(section.to_string()) {
                bail!("duplicate section [{section}]");
            }
            let (kind, name) = match section.split_once('.') {
                Some((k, n)) => (k, Some(n.to_string())),
                None => (section, None),
            };
            let named = || name.clone().ok_or_else(|| anyhow!("section [{kind}] needs a name, e.g. [{kind}.NAME]"));
            match kind {
                "chart" => {
                    let n = name.clone().unwrap_or_else(|| props.get("name").unwrap_or("M").trim().to_string());
                    if m.charts.contains_key(&n) {
                        bail!("duplicate chart `{n}`");
                    }
                    m.charts.insert(n.clone(), chart_from_section(&n, props)?);
                    if name.is_none() {
                        m.default_chart = Some(n);
                    }
                }
                "form" => {
                    m.forms.insert(named()?, item(props, &format!("[{section}]"))?);
                }
                "field" => {
                    m.fields.insert(named()?, item(props, &format!("[{section}]"))?);
                }
                "function" => {
                    m.functions.insert(named()?, item(props, &format!("[{section}]"))?);
                }
                "map" => {
                    let images = props.get("images").ok_or_else(|| anyhow!("[{section}] needs `images`"))?;
                    m.maps.insert(
                        named()?,
                        MapItem {
                            source: props.get("source").map(|s| s.trim().to_string()),
                            target: props.get("target").map(|s| s.trim().to_string()),
                            images: split_top(images, ','),
                        },
                    );
                }
                "connection" => {
                    let mut entries = Vec::new();
                    for (k, v) in props.iter() {
                        if k == "base" {
                            continue;
                        }
                        let (j, i) = parse_connection_key(k)
                            .ok_or_else(|| anyhow!("[{section}]: expected keys `base` or `tJ_I`, got `{k}`"))?;
                        entries.push((j, i, v.trim().to_string()));
                    }
                    m.connections.insert(
                        named()?,
                        ConnectionItem {
                            base: props.get("base").map(|s| s.trim().to_string()),
                            entries,
                        },
                    );
                }
                "metric" => {
                    let rows = props.get("rows").ok_or_else(|| anyhow!("[{section}] needs `rows`"))?;
                    m.metrics.insert(named()?, rows.to_string());
                }
                "lie" => {
                    let mut lie = LieItem::default();
                    for (k, v) in props.iter() {
                        match k {
                            "dim" => lie.dim = v.trim().parse().with_context(|| format!("bad dim `{v}`"))?,
                            "gamma" => lie.gamma = Some(v.to_string()),
                            "xi" => lie.xi = Some(v.to_string()),
                            _ => {
                                let idx = parse_structure_key(k)
                                    .ok_or_else(|| anyhow!("[lie]: expected `dim`, `gamma`, `xi` or `cI_JK`, got `{k}`"))?;
                                lie.entries.push((idx, v.trim().to_string()));
                            }
                        }
                    }
                    if lie.dim == 0 {
                        bail!("[lie] needs a positive `dim`");
                    }
                    m.lie = Some(lie);
                }
                other => bail!("unknown section kind [{other}]"),
            }
        }
        m.check_references()?;
        Ok(m)
    }

    fn check_references(&self) -> Result<()> {
        let mut names = BTreeSet::new();
        let all = self
            .forms
            .keys()
            .chain(self.fields.keys())
            .chain(self.functions.keys())
            .chain(self.maps.keys())
            .chain(self.connections.keys())
            .chain(self.metrics.keys());
        for n in all {
            if !names.insert(n) {
                bail!("name `{n}` is defined twice");
            }
        }
        let charts = self
            .forms
            .values()
            .chain(self.fields.values())
            .chain(self.functions.values())
            .filter_map(|i| i.chart.as_ref())
            .chain(self.maps.values().flat_map(|m| m.source.iter().chain(&m.target)))
            .chain(self.connections.values().filter_map(|c| c.base.as_ref()));
        for c in charts {
            self.chart_or_tangent(c)?;
        }
        if let Some(l) = &self.lie {
            if let Some(g) = &l.gamma {
                let inline = g.contains(',') || g.contains(';') || parse_rational(g).is_ok();
                if !inline && !self.metrics.contains_key(g.trim()) {
                    bail!("[lie] gamma refers to undefined metric `{}`", g.trim());
                }
            }
        }
        Ok(())
    }

    /// A declared chart, or `T<name>` for the tangent bundle of one.
    fn chart_or_tangent(&self, name: &str) -> Result<Chart> {
        if let Some(c) = self.charts.get(name) {
            return Ok(c.clone());
        }
        if let Some(base) = name.strip_prefix('T').and_then(|b| self.charts.get(b)) {
            return Ok(TangentChart::new(base)?.total().clone());
        }
        bail!("undefined chart `{name}`")
    }

    pub fn chart(&self, name: Option<&str>) -> Result<Chart> {
        match name {
            Some(n) => self.chart_or_tangent(n),
            None => match (&self.default_chart, self.charts.len()) {
                (Some(d), _) => Ok(self.charts[d].clone()),
                (None, 1) => Ok(self.charts.values().next().unwrap().clone()),
                (None, 0) => bail!("manifest defines no chart"),
                _ => bail!("several charts and no unnamed [chart]: say which with `chart = NAME`"),
            },
        }
    }

    /// Overrides the sampling seed of every chart.
    pub fn reseed(&mut self, seed: u64) {
        for c in self.charts.values_mut() {
            *c = c.with_seed(seed);
        }
    }

    fn lookup<'a>(map: &'a BTreeMap<String, Item>, name: &str, what: &str) -> Result<&'a Item> {
        map.get(name).ok_or_else(|| anyhow!("undefined {what} `{name}`"))
    }

    pub fn form(&self, name: &str) -> Result<KForm> {
        let it = Self::lookup(&self.forms, name, "form")?;
        let c = self.chart(it.chart.as_deref())?;
        KForm::parse(&it.value, &c, None).with_context(|| format!("form `{name}`"))
    }

    pub fn field(&self, name: &str) -> Result<VecField> {
        let it = Self::lookup(&self.fields, name, "field")?;
        let c = self.chart(it.chart.as_deref())?;
        VecField::parse(&it.value, &c).with_context(|| format!("field `{name}`"))
    }

    /// A function parsed on its declared chart, or on `on` when given.
    pub fn function(&self, name: &str, on: Option<&Chart>) -> Result<Expr> {
        let it = Self::lookup(&self.functions, name, "function")?;
        let c = match (on, &it.chart) {
            (Some(c), _) => c.clone(),
            (None, ch) => self.chart(ch.as_deref())?,
        };
        c.parse(&it.value).with_context(|| format!("function `{name}` on chart `{}`", c.name()))
    }

    pub fn map(&self, name: &str) -> Result<MapExpr> {
        let it = self.maps.get(name).ok_or_else(|| anyhow!("undefined map `{name}`"))?;
        let s = self.chart(it.source.as_deref())?;
        let t = self.chart(it.target.as_deref())?;
        MapExpr::parse(&s, &t, &it.images).with_context(|| format!("map `{name}`"))
    }

    fn single<'a, T>(map: &'a BTreeMap<String, T>, name: Option<&str>, what: &str) -> Result<(&'a String, &'a T)> {
        match name {
            Some(n) => map.get_key_value(n).ok_or_else(|| anyhow!("undefined {what} `{n}`")),
            None if map.len() == 1 => Ok(map.iter().next().unwrap()),
            None if map.is_empty() => bail!("manifest defines no {what}"),
            None => bail!("several {what}s defined: choose one with --{what}"),
        }
    }

    pub fn connection(&self, name: Option<&str>) -> Result<NonlinearConnection> {
        let (n, it) = Self::single(&self.connections, name, "connection")?;
        let base = self.chart(it.base.as_deref())?;
        let tc = TangentChart::new(&base)?;
        let dim = base.dim();
        let mut t = vec![vec![Expr::zero(); dim]; dim];
        for (j, i, src) in &it.entries {
            if *j >= dim || *i >= dim {
                bail!("connection `{n}`: t{}_{} out of range for dimension {dim}", j + 1, i + 1);
            }
            t[*j][*i] = tc.total().parse(src).with_context(|| format!("connection `{n}` t{}_{}", j + 1, i + 1))?;
        }
        Ok(NonlinearConnection::new(&tc, t)?)
    }

    /// Metric rows parsed on `chart`.
    pub fn metric(&self, name: Option<&str>, chart: &Chart) -> Result<Vec<Vec<Expr>>> {
        let (n, rows) = Self::single(&self.metrics, name, "metric")?;
        parse_rows(rows)
            .iter()
            .map(|r| r.iter().map(|e| chart.parse(e).with_context(|| format!("metric `{n}`"))).collect())
            .collect()
    }

    pub fn lie_data(&self) -> Result<LieAlgebraData> {
        let l = self.lie.as_ref().ok_or_else(|| anyhow!("manifest has no [lie] section"))?;
        let r = l.dim;
        let entries = l
            .entries
            .iter()
            .map(|(idx, v)| Ok((*idx, parse_rational(v)?)))
            .collect::<Result<Vec<_>>>()?;
        let rows: Vec<Vec<String>> = match &l.gamma {
            None => (0..r).map(|i| (0..r).map(|j| if i == j { "1" } else { "0" }.to_string()).collect()).collect(),
            Some(g) => match self.metrics.get(g.trim()) {
                Some(rows) => parse_rows(rows),
                None => parse_rows(g),
            },
        };
        let gamma = rows
            .iter()
            .map(|r| r.iter().map(|x| parse_rational(x)).collect())
            .collect::<Result<Vec<Vec<Q>>>>()?;
        Ok(LieAlgebraData::from_entries(r, &entries, gamma)?)
    }

    pub fn lie_xi(&self) -> Option<Result<Vec<Q>>> {
        let xi = self.lie.as_ref()?.xi.as_ref()?;
        Some(split_top(xi, ',').iter().map(|x| parse_rational(x)).collect())
    }
}
