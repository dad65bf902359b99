import init, { WebSimulation, hllcFlux, stokerProfile } from "./pkg/swfv_web.js";

const $ = (id) => document.getElementById(id);

function colormap(v) {
  // white to deep blue
  const t = Math.min(1, Math.max(0, v));
  return `rgb(${Math.round(235 - 205 * t)},${Math.round(245 - 150 * t)},${Math.round(255 - 90 * t)})`;
}

let sim = null;
let playing = true;
let nodes, tris, bounds;

function resetSimulation() {
  try {
    sim = new WebSimulation($("case").value, Number($("nx").value), Number($("ny").value));
    nodes = sim.nodes();
    tris = sim.triangles();
    bounds = sim.bounds();
    $("simInfo").classList.remove("err");
  } catch (e) {
    sim = null;
    $("simInfo").textContent = String(e);
    $("simInfo").classList.add("err");
  }
}

function transform(canvas) {
  const [x0, y0, x1, y1] = bounds;
  const s = Math.min(canvas.width / (x1 - x0), canvas.height / (y1 - y0));
  return {
    s,
    toScreen: (x, y) => [(x - x0) * s, canvas.height - (y - y0) * s],
    toWorld: (px, py) => [x0 + px / s, y0 + (canvas.height - py) / s],
  };
}

function draw() {
  const canvas = $("view");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (!sim) return;
  const field = $("field").value;
  const values = field === "surface" ? sim.surface() : field === "speed" ? sim.speed() : sim.depth();
  let lo = Infinity, hi = -Infinity;
  for (const v of values) { lo = Math.min(lo, v); hi = Math.max(hi, v); }
  const span = hi - lo > 1e-12 ? hi - lo : 1;
  const { toScreen } = transform(canvas);
  const depth = sim.depth();
  for (let c = 0; c < values.length; c++) {
    ctx.beginPath();
    for (let k = 0; k < 3; k++) {
      const n = tris[3 * c + k];
      const [px, py] = toScreen(nodes[2 * n], nodes[2 * n + 1]);
      k === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py);
    }
    ctx.closePath();
    ctx.fillStyle = depth[c] < 1e-6 ? "#c8b28a" : colormap((values[c] - lo) / span);
    ctx.fill();
  }
  $("simInfo").textContent =
    `cells ${sim.cells()}  t = ${sim.time().toFixed(3)} s  steps ${sim.steps()}  ` +
    `mass drift ${sim.massDrift().toExponential(2)}  ${field} in [${lo.toFixed(4)}, ${hi.toFixed(4)}]`;
}

function frame() {
  if (sim && playing) {
    try {
      sim.step(5);
    } catch (e) {
      playing = false;
      $("simInfo").textContent = String(e);
    }
  }
  draw();
  requestAnimationFrame(frame);
}

function updateFlux() {
  try {
    const [mass, mom, sl, ss, sr] = hllcFlux(
      Number($("hl").value), Number($("ul").value), Number($("hr").value), Number($("ur").value));
    $("fluxOut").classList.remove("err");
    $("fluxOut").textContent =
      `mass flux      ${mass.toFixed(6)} m²/s\n` +
      `momentum flux  ${mom.toFixed(6)} m³/s²\n` +
      `wave speeds    SL ${sl.toFixed(4)}  S* ${ss.toFixed(4)}  SR ${sr.toFixed(4)} m/s`;
  } catch (e) {
    $("fluxOut").classList.add("err");
    $("fluxOut").textContent = String(e);
  }
}

function updateProfile() {
  const canvas = $("profile");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const hl = Number($("shl").value), hr = Number($("shr").value), t = Number($("st").value);
  $("stokerLabel").textContent = `hL=${hl} hR=${hr} t=${t}s`;
  let data;
  try {
    data = stokerProfile(hl, hr, t, 100, 401);
  } catch (e) {
    $("stokerLabel").textContent = String(e);
    return;
  }
  const hmax = 2.1;
  ctx.beginPath();
  for (let i = 0; i < data.length / 3; i++) {
    const px = (data[3 * i] / 100) * canvas.width;
    const py = canvas.height - (data[3 * i + 1] / hmax) * canvas.height;
    i === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py);
  }
  ctx.lineTo(canvas.width, canvas.height);
  ctx.lineTo(0, canvas.height);
  ctx.closePath();
  ctx.fillStyle = "#6fa8dc";
  ctx.fill();
}

await init();
resetSimulation();
$("reset").onclick = resetSimulation;
$("case").onchange = resetSimulation;
$("play").onclick = () => {
  playing = !playing;
  $("play").textContent = playing ? "pause" : "play";
};
$("view").onclick = (ev) => {
  if (!sim) return;
  const canvas = $("view");
  const rect = canvas.getBoundingClientRect();
  const { toWorld } = transform(canvas);
  const [x, y] = toWorld(
    (ev.clientX - rect.left) * (canvas.width / rect.width),
    (ev.clientY - rect.top) * (canvas.height / rect.height));
  const [x0, y0, x1, y1] = bounds;
  if (x < x0 || x > x1 || y < y0 || y > y1) return;
  sim.dropWater(x, y, 0.3, 0.03 * Math.max(x1 - x0, y1 - y0));
};
for (const id of ["hl", "ul", "hr", "ur"]) $(id).oninput = updateFlux;
for (const id of ["shl", "shr", "st"]) $(id).oninput = updateProfile;
updateFlux();
updateProfile();
requestAnimationFrame(frame);
