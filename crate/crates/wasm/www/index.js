import init, { tub_curve, weight_enumerator, turbo_trace } from "./pkg/polarprod_wasm.js";

const CODES = ["opt16_7", "ebch16_7", "spc4_3", "rep2_1"];
const $ = (id) => document.getElementById(id);

function fill(select) {
  for (const c of CODES) select.add(new Option(c, c));
}

function show(el, text, failed) {
  el.textContent = text;
  el.className = failed ? "err" : "";
}

function plotLog(canvas, points) {
  const g = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 48;
  g.clearRect(0, 0, w, h);
  const pos = points.filter(([, y]) => y > 0);
  if (pos.length === 0) return;
  const xs = points.map((p) => p[0]);
  const ys = pos.map((p) => Math.log10(p[1]));
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const [y0, y1] = [Math.floor(Math.min(...ys)), Math.ceil(Math.max(...ys))];
  const px = (x) => pad + ((x - x0) / (x1 - x0 || 1)) * (w - 2 * pad);
  const py = (y) => h - pad - ((y - y0) / (y1 - y0 || 1)) * (h - 2 * pad);
  g.strokeStyle = "#ddd";
  g.fillStyle = "#555";
  g.font = "11px sans-serif";
  for (let e = y0; e <= y1; e++) {
    g.beginPath();
    g.moveTo(pad, py(e));
    g.lineTo(w - pad, py(e));
    g.stroke();
    g.fillText(`1e${e}`, 4, py(e) + 4);
  }
  for (const x of xs) g.fillText(x.toFixed(2), px(x) - 12, h - pad + 16);
  g.strokeStyle = "#c00";
  g.lineWidth = 2;
  g.beginPath();
  pos.forEach(([x, y], i) => (i ? g.lineTo : g.moveTo).call(g, px(x), py(Math.log10(y))));
  g.stroke();
}

function runTub() {
  const start = Number($("tub-start").value);
  const stop = Number($("tub-stop").value);
  const r = JSON.parse(tub_curve($("tub-c1").value, $("tub-c2").value, start, stop, 0.25));
  if (r.error) return show($("tub-info"), r.error, true);
  plotLog($("tub-plot"), r.points);
  const rows = r.points.map(([s, v]) => `${s.toFixed(2)} dB  ${v.toExponential(4)}`);
  show($("tub-info"), `${r.label} (${r.length},${r.dimension})  d=${r.d}  A_d=${r.multiplicity}\n${rows.join("\n")}`);
}

function runWef() {
  const r = JSON.parse(weight_enumerator($("wef-code").value));
  if (r.error) return show($("wef-info"), r.error, true);
  const canvas = $("wef-plot");
  const g = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  g.clearRect(0, 0, w, h);
  const max = Math.max(...r.counts.map((c) => c[1]));
  const bar = (w - 40) / (r.length + 1);
  g.font = "11px sans-serif";
  for (const [wt, a] of r.counts) {
    const bh = (Math.log10(a + 1) / Math.log10(max + 1)) * (h - 40);
    g.fillStyle = wt === r.d ? "#c00" : "#468";
    g.fillRect(20 + wt * bar, h - 20 - bh, bar * 0.8, bh);
    g.fillStyle = "#333";
    g.fillText(String(a), 20 + wt * bar, h - 24 - bh);
    g.fillText(String(wt), 20 + wt * bar, h - 6);
  }
  show($("wef-info"), `(${r.length},${r.dimension})  ${r.polynomial}\nd=${r.d}, A_d=${r.multiplicity}`);
}

let trace = null;

function drawStep() {
  if (!trace) return;
  const k = Number($("tr-step").value);
  const wrong = new Set(k === 0 ? trace.channel_wrong : trace.steps[k - 1].wrong);
  const canvas = $("tr-grid");
  const g = canvas.getContext("2d");
  const cell = canvas.width / trace.cols;
  for (let r = 0; r < trace.rows; r++) {
    for (let c = 0; c < trace.cols; c++) {
      g.fillStyle = wrong.has(r * trace.cols + c) ? "#c00" : "#e8eef4";
      g.fillRect(c * cell, r * cell, cell - 1, cell - 1);
    }
  }
  const label = k === 0
    ? `channel hard decision: ${wrong.size} wrong bits`
    : `half iteration ${k} (${trace.steps[k - 1].orientation}): ${wrong.size} wrong bits, ` +
      `mean |LLR| ${trace.steps[k - 1].mean_abs_posterior.toFixed(2)}, valid ${trace.steps[k - 1].valid}`;
  $("tr-step-label").textContent = label;
}

function runTrace() {
  const r = JSON.parse(turbo_trace(
    Number($("tr-snr").value),
    Number($("tr-seed").value) >>> 0,
    Number($("tr-list").value) >>> 0,
    20,
  ));
  if (r.error) return show($("tr-info"), r.error, true);
  trace = r;
  const slider = $("tr-step");
  slider.max = String(r.steps.length);
  slider.value = String(r.steps.length);
  drawStep();
  show($("tr-info"),
    `${r.half_iterations} half iterations, ${r.valid ? "valid codeword" : "no valid codeword"}, ` +
    `${r.decoded_correctly ? "decoded correctly" : "decoding error"}`);
}

await init();
fill($("tub-c1"));
fill($("tub-c2"));
fill($("wef-code"));
$("tub-go").onclick = runTub;
$("wef-go").onclick = runWef;
$("tr-go").onclick = runTrace;
$("tr-step").oninput = drawStep;
runTub();
runWef();
runTrace();
