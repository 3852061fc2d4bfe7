import init, { field_report, rq, family_report } from "./pkg/isosieve_web.js";

const $ = (id) => document.getElementById(id);
const out = $("out");
const status = $("status");

function esc(s) {
  return String(s).replace(/[&<>]/g, (c) => ({ "&": "&amp;", "<": "&lt;", ">": "&gt;" })[c]);
}

function int(id) {
  const v = Number($(id).value.trim());
  if (!Number.isInteger(v)) throw `${id.slice(2)} must be an integer`;
  return v;
}

// Run after the status line has painted; the sieve blocks the main thread.
function run(label, fn) {
  status.textContent = `${label}...`;
  status.className = "";
  setTimeout(() => {
    const t = performance.now();
    try {
      out.innerHTML = fn();
      status.textContent = `${label}: ${(performance.now() - t).toFixed(0)} ms`;
    } catch (e) {
      out.innerHTML = "";
      status.textContent = String(e);
      status.className = "err";
    }
  }, 10);
}

function fieldBlock(f) {
  if (!f) return "";
  const group = f.class_structure.length ? f.class_structure.map((n) => `Z/${n}`).join(" × ") : "trivial";
  let rows = [
    ["discriminant", f.disc],
    ["integral basis", f.integral_basis],
    ["class group", `${group} (h = ${f.class_number})`],
  ];
  if (f.fundamental_unit) rows.push(["fundamental unit", `${f.fundamental_unit} (norm ${f.fundamental_unit_norm})`]);
  rows.push(["ramified primes", f.ramified_primes.join(", ")]);
  return table(["", ""], rows.map(([k, v]) => [k, esc(v)]));
}

function table(head, rows, classes = []) {
  const th = head.some((h) => h) ? `<tr>${head.map((h) => `<th>${h}</th>`).join("")}</tr>` : "";
  const tr = rows.map((r, i) => `<tr class="${classes[i] || ""}">${r.map((c) => `<td>${c}</td>`).join("")}</tr>`);
  return `<table>${th}${tr.join("")}</table>`;
}

function reportHtml(rep) {
  let html = fieldBlock(rep.field);
  for (const [step, title] of [["constant", "Constant signature: gcd of R_q"], ["non_constant", "Non-constant signature: gcd of R_q·M_q"]]) {
    const recs = rep.intermediates.filter((r) => r.step === step);
    if (!recs.length) continue;
    html += `<h3>${title}</h3>`;
    html += table(
      ["q", "gcd", "survivors"],
      recs.map((r) => [r.q, esc(r.running_gcd_factored ?? r.running_gcd), r.survivors ? r.survivors.join(", ") || "none" : "not yet finite"]),
    );
  }
  html += "<h3>Primes</h3>";
  const order = { survives: 0, unresolved: 1, eliminated: 2 };
  const rows = [...rep.outcomes].sort((a, b) => order[a.status] - order[b.status] || a.p - b.p);
  html += table(
    ["p", "status", "reason", "detail"],
    rows.map((o) => {
      const ev = o.evidence.find((e) => e.criterion === o.reason) ?? o.evidence[o.evidence.length - 1];
      const detail = ev ? esc(ev.note) + (ev.aux_prime ? ` (q = ${ev.aux_prime})` : "") : "";
      return [o.p, o.status, o.reason ?? "", detail];
    }),
    rows.map((o) => o.status),
  );
  if (rep.unresolved_classes.length) {
    html += "<h3>Unresolved classes</h3><ul>" + rep.unresolved_classes.map((c) => `<li>${esc(c)}</li>`).join("") + "</ul>";
  }
  html += "<h3>Primes not listed</h3><ul>" + rep.notes.map((n) => `<li>${esc(n)}</li>`).join("") + "</ul>";
  return html;
}

await init();

$("f-go").onclick = () =>
  run("field report", () => reportHtml(JSON.parse(field_report(int("f-d"), int("f-aux")))));

$("c-go").onclick = () =>
  run("family report", () => reportHtml(JSON.parse(family_report(int("c-n"), $("c-inert").value, int("c-aux")))));

$("r-go").onclick = () =>
  run("rq", () => {
    const r = JSON.parse(rq(int("r-d"), int("r-q"), $("r-sig").value));
    return table(["", ""], [
      ["q", `${r.q} (${r.splitting}, n_q = ${r.n_q}, r = ${r.r})`],
      ["α", esc(r.alpha)],
      ["signature", `(${r.signature.join(",")})`],
      [`R_${r.q}`, `<pre>${r.r_q}</pre>`],
      [`M_${r.q}`, `<pre>${r.m_q}</pre>`],
    ]);
  });
