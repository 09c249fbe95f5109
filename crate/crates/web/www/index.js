import init, { pixellate_ball, check_convex, steiner } from "./pkg/l1geo_web.js";

const GRID = 12;
const selected = new Set(["3,3", "4,3", "4,4", "5,4", "5,5"]);

const $ = (id) => document.getElementById(id);
const key = (h) => h.join(",");

function frac(s) {
  const [p, q] = s.split("/").map(Number);
  return q ? p / q : p;
}

function cellsDocument() {
  const cells = [...selected].map((k) => k.split(",").map(Number));
  return JSON.stringify({ kind: "cellset", dimension: 2, resolution: "1", cells });
}

// Draws cells of side `size` pixels with cell (0,0) at pixel `origin`.
function drawCells(ctx, cells, size, origin, fill) {
  ctx.fillStyle = fill;
  for (const [i, j] of cells) {
    ctx.fillRect(origin[0] + i * size, origin[1] - (j + 1) * size, size, size);
  }
}

function drawGrid(ctx, size) {
  ctx.strokeStyle = "#eee";
  for (let t = 0; t <= ctx.canvas.width; t += size) {
    ctx.beginPath(); ctx.moveTo(t, 0); ctx.lineTo(t, ctx.canvas.height); ctx.stroke();
    ctx.beginPath(); ctx.moveTo(0, t); ctx.lineTo(ctx.canvas.width, t); ctx.stroke();
  }
}

function table(headers, rows) {
  const head = headers.map((h) => `<th>${h}</th>`).join("");
  const body = rows.map((r) => `<tr>${r.map((c) => `<td>${c}</td>`).join("")}</tr>`).join("");
  return `<table><tr>${head}</tr>${body}</table>`;
}

function renderBall() {
  const radius = $("radius").value;
  const lambda = $("lambda").value;
  const out = JSON.parse(pixellate_ball(2, radius, lambda));
  const ctx = $("ball").getContext("2d");
  ctx.clearRect(0, 0, 360, 360);
  if (out.error) {
    $("ball-out").textContent = out.error;
    return;
  }
  const r = frac(radius);
  const scale = 150 / (r + 2 * frac(lambda));
  const size = frac(lambda) * scale;
  drawCells(ctx, out.document.cells, size, [180, 180], "#9cc3e6");
  ctx.strokeStyle = "#1d4e89";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(180 + r * scale, 180); ctx.lineTo(180, 180 - r * scale);
  ctx.lineTo(180 - r * scale, 180); ctx.lineTo(180, 180 + r * scale);
  ctx.closePath(); ctx.stroke();
  ctx.lineWidth = 1;
  const limit = [1, 4 * r, 2 * r * r];
  const rows = out.volumes.exact.map((v, i) => [`V′${i}`, v, out.volumes.approx[i].toFixed(4), limit[i].toFixed(4)]);
  $("ball-out").innerHTML =
    `<p>${out.cells} cells, ${out.convex ? "ℓ1-convex" : "not convex"}</p>` +
    table(["", "pixellation", "≈", "ball"], rows);
}

function renderGrid() {
  const ctx = $("grid").getContext("2d");
  const size = 360 / GRID;
  ctx.clearRect(0, 0, 360, 360);
  drawGrid(ctx, size);
  const cells = [...selected].map((k) => k.split(",").map(Number));
  drawCells(ctx, cells, size, [0, 360], "#9cc3e6");
  const out = JSON.parse(check_convex(cellsDocument()));
  if (out.error) {
    $("verdict").textContent = out.error;
    return;
  }
  if (out.convex) {
    $("verdict").innerHTML = `<span class="ok">ℓ1-convex</span>, V′ = (${out.volumes.exact.join(", ")})`;
  } else {
    drawCells(ctx, out.witness, size, [0, 360], "#e8827a");
    $("verdict").innerHTML =
      `<span class="bad">not convex</span>: nothing between ${JSON.stringify(out.witness[0])} and ${JSON.stringify(out.witness[1])}`;
  }
}

function renderSteiner() {
  const m = Number($("m").value);
  $("m-val").textContent = m;
  const ctx = $("steiner").getContext("2d");
  const size = 360 / (GRID + 5);
  ctx.clearRect(0, 0, 360, 360);
  drawGrid(ctx, size);
  if (selected.size === 0) {
    $("steiner-out").textContent = "select some cells above";
    return;
  }
  const out = JSON.parse(steiner(cellsDocument(), BigInt(m)));
  if (out.error) {
    $("steiner-out").textContent = out.error;
    return;
  }
  drawCells(ctx, out.dilated.cells, size, [0, 360], "#cfe0f0");
  drawCells(ctx, [...selected].map((k) => k.split(",").map(Number)), size, [0, 360], "#5a8fc4");
  const rows = out.rows.map((r) => [r.k, r.lhs, r.rhs, r.equal ? "✓" : "✗"]);
  $("steiner-out").innerHTML = table(["k", "V′k(X + mλ·cube)", "Σ C(n−i,n−k) V′i (mλ)^(k−i)", ""], rows);
}

function renderAll() {
  renderGrid();
  renderSteiner();
}

await init();
$("radius").addEventListener("input", renderBall);
$("lambda").addEventListener("change", renderBall);
$("m").addEventListener("input", renderSteiner);
$("clear").addEventListener("click", () => { selected.clear(); renderAll(); });
$("grid").addEventListener("click", (e) => {
  const rect = e.target.getBoundingClientRect();
  const size = rect.width / GRID;
  const i = Math.floor((e.clientX - rect.left) / size);
  const j = GRID - 1 - Math.floor((e.clientY - rect.top) / size);
  const k = key([i, j]);
  if (selected.has(k)) selected.delete(k); else selected.add(k);
  renderAll();
});
renderBall();
renderAll();
