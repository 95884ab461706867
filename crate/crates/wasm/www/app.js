// Demo page wiring. Build the module first:
//   wasm-pack build crates/wasm --target web --out-dir www/pkg
// then serve this directory (any static server works).

import init, { classify_curve, region_points, two_pair_family } from './pkg/fourisog_wasm.js';

const COLORS = ['#2a9d8f', '#e63946', '#999999']; // counted, singular, excluded

function drawRegion(canvas, data) {
  const ctx = canvas.getContext('2d');
  ctx.clearRect(0, 0, canvas.width, canvas.height);

  const aMax = Math.max(data.a_max, 1);
  const bMax = Math.max(data.b_max, 1);
  const pad = 22;
  const sx = (canvas.width / 2 - pad) / aMax;
  const sy = (canvas.height / 2 - pad) / bMax;
  const s = Math.min(sx, sy);
  const cx = canvas.width / 2;
  const cy = canvas.height / 2;

  // Axes.
  ctx.strokeStyle = '#8888';
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.moveTo(0, cy); ctx.lineTo(canvas.width, cy);
  ctx.moveTo(cx, 0); ctx.lineTo(cx, canvas.height);
  ctx.stroke();

  const r = Math.max(1.2, Math.min(4, s * 0.33));
  for (const [a, b, cls] of data.points) {
    ctx.fillStyle = COLORS[cls];
    for (const signed of a === 0 ? [0] : [a, -a]) {
      ctx.beginPath();
      ctx.arc(cx + signed * s, cy - b * s, r, 0, 2 * Math.PI);
      ctx.fill();
    }
  }
}

function setupRegion() {
  const slider = document.getElementById('regionExp');
  const out = document.getElementById('regionExpOut');
  const canvas = document.getElementById('regionCanvas');
  const stats = document.getElementById('regionStats');

  const render = () => {
    out.textContent = slider.value;
    const data = JSON.parse(region_points(`10^${slider.value}`));
    if (data.error) {
      stats.textContent = data.error;
      stats.classList.add('error');
      return;
    }
    stats.classList.remove('error');
    drawRegion(canvas, data);
    stats.textContent =
      `${data.points.length} region points shown (half-plane a ≥ 0) — ` +
      `counted lattice points: ${data.lattice_count}, ` +
      `curves with ≥ 1 pair: N₁ = ${data.n1}, with 2 pairs: N₂ = ${data.n2}`;
  };
  slider.addEventListener('input', render);
  render();
}

function setupClassify() {
  const box = document.getElementById('classifyResult');
  const run = () => {
    const a = document.getElementById('classifyA').value;
    const b = document.getElementById('classifyB').value;
    const res = JSON.parse(classify_curve(a, b));
    if (res.error) {
      box.innerHTML = `<span class="error">${res.error}</span>`;
      return;
    }
    let html = `curve <b>y² = x³ + (${res.a})x + (${res.b})</b><br>` +
      `height ${res.height}<br>` +
      `pairs of Galois-stable cyclic order-4 subgroups: <b>${res.count}</b>`;
    for (const w of res.witnesses) {
      html += `<br>&nbsp;&nbsp;witness b₀ = ${w.b0}, a = ${w.a} ` +
        `(shifted model x(x² + ${w.gamma}x + ${w.delta}²))`;
    }
    if (res.triple) {
      const t = res.triple;
      html += `<br>two-pair parameter (r, v, w) = (${t.r}, ${t.v}, ${t.w}), case ${t.case}` +
        `<br>Legendre-style roots: ${t.legendre_roots.join(', ')}`;
    }
    box.innerHTML = html;
  };
  document.getElementById('classifyBtn').addEventListener('click', run);
  run();
}

function setupFamily() {
  const stats = document.getElementById('familyStats');
  const table = document.getElementById('familyTable');
  const body = table.querySelector('tbody');
  const run = () => {
    const res = JSON.parse(two_pair_family(document.getElementById('familyX').value));
    if (res.error) {
      stats.textContent = res.error;
      stats.classList.add('error');
      table.hidden = true;
      return;
    }
    stats.classList.remove('error');
    const shown = Math.min(res.count, 500);
    stats.textContent = `N₂ = ${res.count} curves of height ≤ ${res.x}` +
      (shown < res.count ? ` (showing the first ${shown})` : '');
    body.innerHTML = '';
    res.curves.slice(0, shown).forEach((c, i) => {
      const tr = document.createElement('tr');
      for (const cell of [i + 1, c.r, c.v, c.w, c.case, c.a, c.b, c.height]) {
        const td = document.createElement('td');
        td.textContent = cell;
        tr.appendChild(td);
      }
      body.appendChild(tr);
    });
    table.hidden = res.count === 0;
  };
  document.getElementById('familyBtn').addEventListener('click', run);
  run();
}

await init();
setupRegion();
setupClassify();
setupFamily();
