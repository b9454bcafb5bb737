// Wires the three panels to the wasm exports. Build the module first:
//   cargo build -p effect-order-demo --target wasm32-unknown-unknown --release
//   wasm-bindgen --target web --out-dir crates/demo/www/pkg \
//     target/wasm32-unknown-unknown/release/effect_order_demo.wasm
// then serve crates/demo/www/ from any static file server.

import init, { moebius_curve, automorphism_demo, boundary_demo } from "./pkg/effect_order_demo.js";

const css = getComputedStyle(document.body);
const FG = css.color || "#222";
const ACCENT = "#2b7de9";
const ACCENT2 = "#e9662b";

function setupCanvas(id) {
  const canvas = document.getElementById(id);
  const ctx = canvas.getContext("2d");
  return { canvas, ctx, w: canvas.width, h: canvas.height };
}

function clear({ ctx, w, h }) {
  ctx.clearRect(0, 0, w, h);
}

function frame({ ctx, w, h }, pad) {
  ctx.strokeStyle = FG;
  ctx.globalAlpha = 0.35;
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.globalAlpha = 1;
}

// Panel 1: the scalar curve.

const curve = setupCanvas("curve-canvas");

function drawCurve(p) {
  const data = JSON.parse(moebius_curve(p, 241));
  document.getElementById("curve-p-val").textContent = `p = ${p.toFixed(2)}`;
  document.getElementById("curve-readout").textContent =
    `inverse parameter p/(p-1) = ${data.inverse_p.toPrecision(6)}   ` +
    `|compose(p, inverse)| = ${data.inverse_residual.toExponential(2)}`;
  clear(curve);
  const pad = 20;
  frame(curve, pad);
  const { ctx, w, h } = curve;
  // Reference diagonal (the identity, p = 0).
  ctx.strokeStyle = FG;
  ctx.globalAlpha = 0.3;
  ctx.setLineDash([4, 4]);
  ctx.beginPath();
  ctx.moveTo(pad, h - pad);
  ctx.lineTo(w - pad, pad);
  ctx.stroke();
  ctx.setLineDash([]);
  ctx.globalAlpha = 1;
  ctx.strokeStyle = ACCENT;
  ctx.lineWidth = 2;
  ctx.beginPath();
  data.xs.forEach((x, i) => {
    const px = pad + x * (w - 2 * pad);
    const py = h - pad - data.ys[i] * (h - 2 * pad);
    if (i === 0) ctx.moveTo(px, py);
    else ctx.lineTo(px, py);
  });
  ctx.stroke();
  ctx.lineWidth = 1;
}

// Panel 2: spectra before and after an automorphism.

const auto = setupCanvas("auto-canvas");

function drawSpectra(data) {
  clear(auto);
  const pad = 20;
  frame(auto, pad);
  const { ctx, w, h } = auto;
  const groups = [
    ["A", data.eig_a, ACCENT],
    ["B", data.eig_b, ACCENT],
    ["phi(A)", data.eig_fa, ACCENT2],
    ["phi(B)", data.eig_fb, ACCENT2],
  ];
  const span = (w - 2 * pad) / groups.length;
  ctx.font = "13px system-ui";
  groups.forEach(([label, eigs, color], g) => {
    const x0 = pad + g * span;
    ctx.fillStyle = FG;
    ctx.fillText(label, x0 + span / 2 - ctx.measureText(label).width / 2, h - 4);
    const bw = Math.min(26, (span - 30) / eigs.length);
    eigs.forEach((e, i) => {
      const bh = Math.max(1, e * (h - 2 * pad));
      ctx.fillStyle = color;
      ctx.globalAlpha = 0.85;
      ctx.fillRect(x0 + 15 + i * (bw + 4), h - pad - bh, bw, bh);
      ctx.globalAlpha = 1;
    });
  });
}

function runAuto() {
  const dim = Number(document.getElementById("auto-dim").value);
  const p = Number(document.getElementById("auto-p").value);
  const seed = BigInt(document.getElementById("auto-seed").value || "0");
  document.getElementById("auto-val").textContent = `dim = ${dim}, p = ${p.toFixed(1)}`;
  try {
    const data = JSON.parse(automorphism_demo(dim, seed, p));
    drawSpectra(data);
    document.getElementById("auto-readout").textContent =
      `operator kind: ${data.antilinear ? "antilinear" : "linear"}\n` +
      `min eig(B - A) = ${data.input_margin.toExponential(3)}   ` +
      `min eig(phi(B) - phi(A)) = ${data.image_margin.toExponential(3)}\n` +
      `|phi(0)| = ${data.zero_dev.toExponential(2)}   ` +
      `|phi(I) - I| = ${data.identity_dev.toExponential(2)}`;
  } catch (e) {
    document.getElementById("auto-readout").textContent = `error: ${e}`;
  }
}

// Panel 3: boundary gap profile on a log scale.

const bound = setupCanvas("bound-canvas");

function runBoundary() {
  const dim = Number(document.getElementById("bound-dim").value);
  const defInput = document.getElementById("bound-def");
  defInput.max = String(dim - 1);
  const deficiency = Math.min(Number(defInput.value), dim - 1);
  defInput.value = String(deficiency);
  const seed = BigInt(document.getElementById("bound-seed").value || "0");
  let data;
  try {
    data = JSON.parse(boundary_demo(dim, seed, deficiency, 14));
  } catch (e) {
    document.getElementById("bound-readout").textContent = `error: ${e}`;
    return;
  }
  clear(bound);
  const pad = 30;
  frame(bound, pad);
  const { ctx, w, h } = bound;
  const gaps = data.steps.map(s => Math.max(s.raw_gap, 1e-18));
  const extr = data.steps.map(s => Math.max(s.extrapolated_gap, 1e-18));
  const lo = Math.log10(Math.min(...extr, 1e-14));
  const hi = Math.log10(Math.max(...gaps, 1e-2));
  const px = k => pad + (k / (data.steps.length - 1)) * (w - 2 * pad);
  const py = v => pad + ((hi - Math.log10(v)) / (hi - lo)) * (h - 2 * pad);
  const polyline = (vals, color) => {
    ctx.strokeStyle = color;
    ctx.lineWidth = 2;
    ctx.beginPath();
    vals.forEach((v, i) => (i === 0 ? ctx.moveTo(px(i), py(v)) : ctx.lineTo(px(i), py(v))));
    ctx.stroke();
    ctx.lineWidth = 1;
  };
  polyline(gaps, ACCENT);
  polyline(extr, ACCENT2);
  ctx.fillStyle = FG;
  ctx.font = "13px system-ui";
  ctx.fillText("raw gap", w - pad - 130, pad + 16);
  ctx.fillStyle = ACCENT;
  ctx.fillRect(w - pad - 150, pad + 8, 14, 4);
  ctx.fillStyle = FG;
  ctx.fillText("extrapolated", w - pad - 130, pad + 34);
  ctx.fillStyle = ACCENT2;
  ctx.fillRect(w - pad - 150, pad + 26, 14, 4);
  const last = data.steps[data.steps.length - 1];
  document.getElementById("bound-readout").textContent =
    `input eigenvalues: [${data.eig_input.map(e => e.toPrecision(3)).join(", ")}]\n` +
    `gap at k = ${last.k}: raw ${last.raw_gap.toExponential(3)}, ` +
    `extrapolated ${last.extrapolated_gap.toExponential(3)}`;
}

await init();

const curveSlider = document.getElementById("curve-p");
curveSlider.addEventListener("input", () => drawCurve(Number(curveSlider.value)));
drawCurve(Number(curveSlider.value));

for (const id of ["auto-dim", "auto-p"]) {
  document.getElementById(id).addEventListener("input", runAuto);
}
document.getElementById("auto-resample").addEventListener("click", () => {
  const seedBox = document.getElementById("auto-seed");
  seedBox.value = String(Number(seedBox.value || "0") + 1);
  runAuto();
});
runAuto();

for (const id of ["bound-dim", "bound-def"]) {
  document.getElementById(id).addEventListener("input", runBoundary);
}
document.getElementById("bound-resample").addEventListener("click", () => {
  const seedBox = document.getElementById("bound-seed");
  seedBox.value = String(Number(seedBox.value || "0") + 1);
  runBoundary();
});
runBoundary();
