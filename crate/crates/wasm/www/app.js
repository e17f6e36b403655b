// Expects the wasm-bindgen output (`--target web`) in ./pkg.
import init, { eigenvalueTrajectories, metricProfile, cosineSum } from "./pkg/ptmetric_wasm.js";

const $ = (id) => document.getElementById(id);
const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

function call(fn, ...args) {
  const out = JSON.parse(fn(...args));
  if (out.error) throw new Error(out.error);
  return out;
}

// series: [{ x: [...], y: [...], color, dots }]
function plot(canvas, series, labels) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 40;
  ctx.clearRect(0, 0, w, h);
  const xs = series.flatMap((s) => s.x), ys = series.flatMap((s) => s.y).filter(Number.isFinite);
  if (!xs.length || !ys.length) return;
  let [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (x1 === x0) x1 = x0 + 1;
  if (y1 === y0) { y0 -= 1; y1 += 1; }
  const margin = 0.05 * (y1 - y0);
  y0 -= margin; y1 += margin;
  const px = (x) => pad + ((x - x0) / (x1 - x0)) * (w - 2 * pad);
  const py = (y) => h - pad - ((y - y0) / (y1 - y0)) * (h - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  if (y0 < 0 && y1 > 0) {
    ctx.beginPath(); ctx.moveTo(pad, py(0)); ctx.lineTo(w - pad, py(0)); ctx.stroke();
  }
  ctx.fillStyle = "#555";
  ctx.font = "12px sans-serif";
  ctx.fillText(x0.toPrecision(3), pad, h - pad + 15);
  ctx.fillText(x1.toPrecision(3), w - pad - 30, h - pad + 15);
  ctx.fillText(y1.toPrecision(3), 2, pad + 4);
  ctx.fillText(y0.toPrecision(3), 2, h - pad);
  if (labels) ctx.fillText(labels, pad + 5, pad - 8);

  for (const s of series) {
    ctx.strokeStyle = ctx.fillStyle = s.color;
    if (s.dots) {
      s.x.forEach((x, i) => { if (Number.isFinite(s.y[i])) ctx.fillRect(px(x) - 1.5, py(s.y[i]) - 1.5, 3, 3); });
      continue;
    }
    ctx.beginPath();
    s.x.forEach((x, i) => (i ? ctx.lineTo(px(x), py(s.y[i])) : ctx.moveTo(px(x), py(s.y[i]))));
    ctx.stroke();
  }
}

function runTrajectories() {
  try {
    const sweepBeta = $("t-param").value === "beta";
    const t = call(eigenvalueTrajectories, sweepBeta, +$("t-start").value, +$("t-stop").value, 81,
      +$("t-fixed").value, +$("t-d").value, +$("t-kmax").value);
    const series = [];
    const branches = Math.max(...t.points.map((p) => p.re.length));
    for (let j = 0; j < branches; j++) {
      const pts = t.points.filter((p) => j < p.re.length);
      series.push({ x: pts.map((p) => p.param), y: pts.map((p) => p.re[j]), color: COLORS[j % COLORS.length], dots: true });
      const cx = pts.filter((p) => p.im[j] !== 0);
      if (cx.length) series.push({ x: cx.map((p) => p.param), y: cx.map((p) => p.im[j]), color: "#000", dots: true });
    }
    plot($("t-canvas"), series, "Re k² (colour), Im k² (black)");
    $("t-info").textContent = t.complex_at.length
      ? `complex pairs at ${sweepBeta ? "β" : "α"} ∈ [${Math.min(...t.complex_at).toFixed(3)}, ${Math.max(...t.complex_at).toFixed(3)}]`
      : "spectrum real along the whole sweep";
    $("t-info").className = "info";
  } catch (e) {
    $("t-info").textContent = e.message;
    $("t-info").className = "info error";
  }
}

function runMetric() {
  const alpha = +$("m-alpha").value, mix = +$("m-mix").value;
  $("m-alpha-v").textContent = alpha.toFixed(2);
  $("m-mix-v").textContent = mix.toFixed(2);
  try {
    const p = call(metricProfile, alpha, Math.PI, 512, Math.max(0, Math.round(+$("m-mode").value)), mix);
    plot($("m-canvas"), [
      { x: p.x, y: p.input, color: "#999" },
      { x: p.x, y: p.re, color: COLORS[0] },
      { x: p.x, y: p.im, color: COLORS[1] },
    ], "Re ψ (grey), Re Θψ (blue), Im Θψ (red), d = π");
    $("m-info").textContent = `(ψ, Θψ) / ‖ψ‖² = ${p.form_ratio.toExponential(4)}` +
      (p.degenerate ? "   αd/π is a non-zero integer: Θ has a kernel spanned by e^{−iαx}" : "");
    $("m-info").className = "info";
  } catch (e) {
    $("m-info").textContent = e.message;
    $("m-info").className = "info error";
  }
}

function runSum() {
  const terms = Math.round(10 ** +$("s-terms").value);
  $("s-terms-v").textContent = terms;
  const c = call(cosineSum, 1.0, terms, 801);
  plot($("s-canvas"), [
    { x: c.x, y: c.limit, color: "#999" },
    { x: c.x, y: c.sum, color: COLORS[0] },
  ], "partial sum (blue) and −x/d (grey), d = 1");
  $("s-info").textContent = `max error on [0.1d, 0.9d]: ${c.interior_error.toExponential(3)}; value at x = d: ${c.sum[c.sum.length - 1].toFixed(3)}`;
}

await init();
$("t-run").addEventListener("click", runTrajectories);
for (const id of ["m-alpha", "m-mode", "m-mix"]) $(id).addEventListener("input", runMetric);
$("s-terms").addEventListener("input", runSum);
runTrajectories();
runMetric();
runSum();
