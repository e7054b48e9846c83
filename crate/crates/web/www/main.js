import init, { compareRegimes, metricCurves, semanticsSummary } from "./pkg/typed_kge_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function graphArgs() {
  return [num("classes"), num("epc"), num("relations"), num("tpr"), num("noise"), num("seed")];
}

function fail(target, err) {
  target.innerHTML = "";
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = String(err);
  target.appendChild(p);
}

function table(head, rows) {
  const t = document.createElement("table");
  const tr = t.insertRow();
  for (const h of head) {
    const th = document.createElement("th");
    th.textContent = h;
    tr.appendChild(th);
  }
  for (const row of rows) {
    const r = t.insertRow();
    for (const cell of row) r.insertCell().textContent = cell;
  }
  return t;
}

// points in [0,1]^2, drawn as a polyline
function plot(title, points, xLabel, yLabel, steps) {
  const size = 220, pad = 30;
  const ns = "http://www.w3.org/2000/svg";
  const svg = document.createElementNS(ns, "svg");
  svg.setAttribute("width", size + 2 * pad);
  svg.setAttribute("height", size + 2 * pad);
  const x = (v) => pad + v * size;
  const y = (v) => pad + (1 - v) * size;
  let path = steps ? `M${x(0)},${y(points[0][1])}` : `M${x(points[0][0])},${y(points[0][1])}`;
  for (const [px, py] of points) path += steps ? `H${x(px)}V${y(py)}` : `L${x(px)},${y(py)}`;
  const add = (tag, attrs, text) => {
    const el = document.createElementNS(ns, tag);
    for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, v);
    if (text) el.textContent = text;
    svg.appendChild(el);
  };
  add("rect", { x: pad, y: pad, width: size, height: size, fill: "none", stroke: "#999" });
  add("path", { d: path, fill: "none", stroke: "#1f5fa8", "stroke-width": 2 });
  add("text", { x: pad, y: 18 }, title);
  add("text", { x: pad + size / 2 - 20, y: size + 2 * pad - 6, "font-size": 11 }, xLabel);
  add("text", { x: 2, y: pad + size / 2, "font-size": 11 }, yLabel);
  return svg;
}

function showSummary() {
  const out = $("summary-out");
  try {
    const s = JSON.parse(semanticsSummary(...graphArgs()));
    const rows = s.relations.map((r) => [
      r.relation,
      `${r.domain_classes} → ${r.range_classes}`,
      r.triples,
      `${r.none[0]} × ${r.none[1]}`,
      `${r.schema[0]} × ${r.schema[1]}`,
      `${r.lcwa[0]} × ${r.lcwa[1]}`,
    ]);
    out.replaceChildren(table(["relation", "signature", "triples", "none", "schema", "lcwa"], rows));
  } catch (e) {
    fail(out, e);
  }
}

function runComparison() {
  const out = $("compare-out");
  out.textContent = "training…";
  // let the status text render before the synchronous call blocks
  setTimeout(() => {
    try {
      const r = JSON.parse(
        compareRegimes($("model").value, num("dim"), num("epochs"), ...graphArgs()),
      );
      const rows = r.results.map((x) => [
        x.regime,
        x.auprc.toFixed(3),
        x.auroc.toFixed(3),
        `${x.best_epoch} / ${x.epochs}`,
      ]);
      const note = document.createElement("p");
      note.textContent =
        `${r.model}, d=${r.dim}: ${r.entities} entities, ${r.triples} triples; ` +
        `holdout ${r.holdout_positives} positives against ${r.holdout_negatives} schema-respecting negatives.`;
      out.replaceChildren(note, table(["regime", "AUPRC", "AUROC", "best / run epochs"], rows));
    } catch (e) {
      fail(out, e);
    }
  }, 10);
}

function showCurves() {
  const out = $("curves-out");
  try {
    const r = JSON.parse(metricCurves($("scores").value));
    const p = document.createElement("p");
    p.textContent = `${r.n} examples: AUPRC ${r.auprc.toFixed(4)}, AUROC ${r.auroc.toFixed(4)}`;
    out.replaceChildren(
      p,
      plot("precision / recall", r.pr, "recall", "prec.", true),
      plot("ROC", r.roc, "FPR", "TPR", false),
    );
  } catch (e) {
    fail(out, e);
  }
}

await init();
$("summary-run").onclick = showSummary;
$("compare-run").onclick = runComparison;
$("curves-run").onclick = showCurves;
showCurves();
