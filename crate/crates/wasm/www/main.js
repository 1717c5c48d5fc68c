import init, { landscape, scaling, solve } from "./pkg/lcqaoa_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function timed(statusId, f) {
  const t0 = performance.now();
  try {
    const msg = f();
    $(statusId).textContent = `${msg} (${(performance.now() - t0).toFixed(0)} ms)`;
  } catch (e) {
    $(statusId).textContent = `error: ${e.message ?? e}`;
  }
}

// Blue (low) to yellow (high).
function color(t) {
  const r = Math.round(255 * Math.min(1, 2 * t));
  const g = Math.round(255 * t);
  const b = Math.round(255 * (1 - t));
  return `rgb(${r},${g},${b})`;
}

function drawLandscape() {
  timed("ls-status", () => {
    const steps = num("ls-steps");
    const grid = landscape(num("ls-n"), num("ls-d"), num("ls-seed"), $("ls-ansatz").value, steps);
    const lo = Math.min(...grid);
    const hi = Math.max(...grid);
    const ctx = $("ls-canvas").getContext("2d");
    const cell = ctx.canvas.width / steps;
    for (let i = 0; i < steps; i++) {
      for (let j = 0; j < steps; j++) {
        ctx.fillStyle = color((grid[i * steps + j] - lo) / (hi - lo || 1));
        // gamma down the rows, beta across the columns
        ctx.fillRect(j * cell, i * cell, cell + 1, cell + 1);
      }
    }
    let best = 0;
    grid.forEach((v, k) => { if (v > grid[best]) best = k; });
    const gamma = (Math.PI * Math.floor(best / steps)) / steps;
    const beta = (Math.PI / 2) * (best % steps) / steps;
    return `expected AR from ${lo.toFixed(3)} to ${hi.toFixed(3)}; best at γ = ${gamma.toFixed(3)}, β = ${beta.toFixed(3)}`;
  });
}

function axes(ctx, pad, xmax, ymax, xlabel, ylabel) {
  const { width: w, height: h } = ctx.canvas;
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#888";
  ctx.fillStyle = "#444";
  ctx.beginPath();
  ctx.moveTo(pad, 10);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - 10, h - pad);
  ctx.stroke();
  ctx.fillText(`${ymax}`, 4, 14);
  ctx.fillText(ylabel, 4, h / 2);
  ctx.fillText(`${xmax}`, w - 30, h - pad + 14);
  ctx.fillText(xlabel, w / 2, h - 6);
  return {
    x: (v) => pad + (v / xmax) * (w - pad - 10),
    y: (v) => h - pad - (v / ymax) * (h - pad - 10),
  };
}

function drawScaling() {
  timed("sc-status", () => {
    const rows = JSON.parse(scaling(num("sc-d"), num("sc-min"), num("sc-max"), num("sc-seed")));
    if (rows.length === 0) return "no valid n in range";
    const ctx = $("sc-canvas").getContext("2d");
    const xmax = rows[rows.length - 1].n;
    const ymax = Math.max(...rows.map((r) => r.original.two_qubit_count));
    const s = axes(ctx, 40, xmax, ymax, "n", "2q gates");
    for (const [key, stroke] of [["original", "#d62728"], ["lc", "#1f77b4"]]) {
      ctx.strokeStyle = stroke;
      ctx.beginPath();
      rows.forEach((r, k) => {
        const f = k === 0 ? "moveTo" : "lineTo";
        ctx[f](s.x(r.n), s.y(r[key].two_qubit_count));
      });
      ctx.stroke();
    }
    const last = rows[rows.length - 1];
    return `n = ${last.n}: LC ${last.lc.two_qubit_count} gates, ${(last.lc.duration * 1e9).toFixed(0)} ns; ` +
      `routed original ${last.original.two_qubit_count} gates (${last.original.swap_count} SWAPs), ` +
      `${(last.original.duration * 1e6).toFixed(1)} μs`;
  });
}

function drawSolve() {
  timed("sv-status", () => {
    const r = JSON.parse(solve(num("sv-n"), num("sv-d"), num("sv-seed"), $("sv-ansatz").value, num("sv-p"), num("sv-shots")));
    const pre = r.histogram.pre;
    const post = r.histogram.post ?? pre.map(() => 0);
    const first = Math.max(0, Math.min(pre.findIndex((c) => c > 0), post.findIndex((c) => c > 0)) - 2);
    const ctx = $("sv-canvas").getContext("2d");
    const bins = pre.length - first;
    const ymax = Math.max(...pre, ...post);
    const s = axes(ctx, 40, bins, ymax, `AR (${(first / 100).toFixed(2)} to 1.00)`, "shots");
    const w = (s.x(1) - s.x(0)) / 2;
    for (let k = 0; k < bins; k++) {
      ctx.fillStyle = "#9ecae1";
      ctx.fillRect(s.x(k), s.y(pre[first + k]), w, s.y(0) - s.y(pre[first + k]));
      ctx.fillStyle = "#31a354";
      ctx.fillRect(s.x(k) + w, s.y(post[first + k]), w, s.y(0) - s.y(post[first + k]));
    }
    const a = r.ar;
    return `MaxCut ${r.true_maxcut}, baseline AR ${r.baseline_ar.toFixed(3)}, expected AR ${r.expected_ar.toFixed(3)}\n` +
      `mean AR ${a.mean_ar.toFixed(3)} → ${a.mean_ar_post.toFixed(3)}, best AR ${a.best_ar.toFixed(3)} → ${a.best_ar_post.toFixed(3)}`;
  });
}

await init();
$("ls-run").onclick = drawLandscape;
$("sc-run").onclick = drawScaling;
$("sv-run").onclick = drawSolve;
drawLandscape();
drawScaling();
drawSolve();
