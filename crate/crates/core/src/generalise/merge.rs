use std::collections::{BTreeMap, BTreeSet};

use super::similarity::{check_pruned, cluster_partition, similarity_matrix};
use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::ofs::{validate_model, ObjectSet, OfsModel, RegexExpr, Rule};

/// One merge performed by [`generalise`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeRecord {
    pub new_name: String,
    pub level: usize,
    /// Original names, sorted.
    pub members: Vec<String>,
    pub tau: Rational,
}

/// Sorted labels joined by `_`; on collision with a name outside the group
/// the level index is appended.
fn merged_name(members: &[String], level: usize, taken: &BTreeSet<String>) -> String {
    let mut sorted = members.to_vec();
    sorted.sort();
    let name = sorted.join("_");
    if taken.contains(&name) {
        format!("{name}_{level}")
    } else {
        name
    }
}

/// Merges level-0 sets whose similarity reaches `tau`, then merges upper
/// rules whose right-hand sides have become identical, level by level.
pub fn generalise(model: &OfsModel, tau: Rational) -> Result<(OfsModel, Vec<MergeRecord>)> {
    check_pruned(model)?;
    let report = validate_model(model);
    if !report.is_valid() {
        return Err(Error::InvalidModel(report));
    }
    let matrix = similarity_matrix(model)?;
    let partition = cluster_partition(&matrix, tau);

    let mut records = Vec::new();
    let mut renames: BTreeMap<String, String> = BTreeMap::new();
    let mut out = model.clone();

    // level 0
    let index: BTreeMap<&str, usize> = model
        .base
        .iter()
        .enumerate()
        .map(|(i, r)| (r.name.as_str(), i))
        .collect();
    let mut merged_at: BTreeMap<usize, Rule<ObjectSet>> = BTreeMap::new();
    let mut removed: BTreeSet<usize> = BTreeSet::new();
    let mut created: BTreeSet<String> = BTreeSet::new();
    for block in partition.blocks.iter().filter(|b| b.len() > 1) {
        let mut taken = taken_names(rule_names(&model.base, &model.upper), block);
        taken.extend(created.iter().cloned());
        let name = merged_name(block, 0, &taken);
        created.insert(name.clone());
        let mut set = ObjectSet::new();
        let mut first = usize::MAX;
        for member in block {
            let i = index[member.as_str()];
            first = first.min(i);
            removed.insert(i);
            set.union_with(&model.base[i].rhs);
            renames.insert(member.clone(), name.clone());
        }
        merged_at.insert(first, Rule::new(name.clone(), set));
        records.push(MergeRecord {
            new_name: name,
            level: 0,
            members: block.clone(),
            tau,
        });
    }
    out.base = model
        .base
        .iter()
        .enumerate()
        .filter_map(|(i, r)| match merged_at.remove(&i) {
            Some(m) => Some(m),
            None if removed.contains(&i) => None,
            None => Some(r.clone()),
        })
        .collect();

    // percolate upwards
    for level in 1..=out.upper.len() {
        let rules = &mut out.upper[level - 1];
        if !renames.is_empty() {
            for r in rules.iter_mut() {
                r.rhs = r.rhs.rename(&renames);
            }
        }
        let mut groups: BTreeMap<RegexExpr, Vec<usize>> = BTreeMap::new();
        for (i, r) in rules.iter().enumerate() {
            groups.entry(r.rhs.canonicalize()).or_default().push(i);
        }
        let groups: Vec<(RegexExpr, Vec<usize>)> =
            groups.into_iter().filter(|(_, g)| g.len() > 1).collect();
        if groups.is_empty() {
            continue;
        }
        let mut level_renames = BTreeMap::new();
        let mut merged_at: BTreeMap<usize, Rule<RegexExpr>> = BTreeMap::new();
        let mut removed: BTreeSet<usize> = BTreeSet::new();
        let mut created: BTreeSet<String> = BTreeSet::new();
        for (rhs, members) in groups {
            let names: Vec<String> = members.iter().map(|&i| out.upper[level - 1][i].name.clone()).collect();
            let mut taken = taken_names(rule_names(&out.base, &out.upper), &names);
            taken.extend(created.iter().cloned());
            let name = merged_name(&names, level, &taken);
            created.insert(name.clone());
            for (&i, n) in members.iter().zip(&names) {
                removed.insert(i);
                level_renames.insert(n.clone(), name.clone());
            }
            merged_at.insert(members[0], Rule::new(name.clone(), rhs));
            let mut sorted = names;
            sorted.sort();
            records.push(MergeRecord {
                new_name: name,
                level,
                members: sorted,
                tau,
            });
        }
        let rules = &mut out.upper[level - 1];
        *rules = rules
            .drain(..)
            .enumerate()
            .filter_map(|(i, r)| match merged_at.remove(&i) {
                Some(m) => Some(m),
                None if removed.contains(&i) => None,
                None => Some(r),
            })
            .collect();
        // rules may skip levels, so earlier renames stay in force
        renames.extend(level_renames);
    }

    let report = validate_model(&out);
    if !report.is_valid() {
        return Err(Error::Internal(format!("generalised model is invalid: {report}")));
    }
    Ok((out, records))
}

fn rule_names(base: &[Rule<ObjectSet>], upper: &[Vec<Rule<RegexExpr>>]) -> BTreeSet<String> {
    base.iter()
        .map(|r| r.name.clone())
        .chain(upper.iter().flatten().map(|r| r.name.clone()))
        .collect()
}

/// Names in use other than the group's own.
fn taken_names(mut names: BTreeSet<String>, group: &[String]) -> BTreeSet<String> {
    for g in group {
        names.remove(g);
    }
    names
}
