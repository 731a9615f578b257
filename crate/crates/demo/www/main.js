import init, { pattern_svg, arc_svg, target_json } from "./pkg/laby_demo.js";

const $ = (id) => document.getElementById(id);

function show(el, fn) {
  try {
    el.innerHTML = fn();
  } catch (e) {
    el.innerHTML = `<p class="err">${e}</p>`;
  }
}

function drawPattern() {
  show($("pattern"), () =>
    pattern_svg($("kind").value, Number($("k").value), $("left").checked, $("arms").checked, $("path").value));
}

function drawArc() {
  show($("arc"), () => arc_svg(Number($("levels").value), $("from").value, $("to").value));
}

function plot(rows, delta) {
  const c = $("plot");
  const g = c.getContext("2d");
  g.clearRect(0, 0, c.width, c.height);
  if (rows.length === 0) return;
  const ys = rows.flatMap((r) => [r.r, r.estimate]).concat([delta]);
  const lo = Math.min(...ys), hi = Math.max(...ys);
  const pad = (hi - lo) * 0.1 || 0.01;
  const x = (i) => 40 + (i / Math.max(rows.length - 1, 1)) * (c.width - 60);
  const y = (v) => c.height - 20 - ((v - lo + pad) / (hi - lo + 2 * pad)) * (c.height - 40);
  g.strokeStyle = "#999";
  g.setLineDash([4, 4]);
  g.beginPath(); g.moveTo(40, y(delta)); g.lineTo(c.width - 20, y(delta)); g.stroke();
  g.setLineDash([]);
  for (const [key, colour] of [["r", "#1f77b4"], ["estimate", "#d62728"]]) {
    g.strokeStyle = colour;
    g.beginPath();
    rows.forEach((r, i) => (i ? g.lineTo(x(i), y(r[key])) : g.moveTo(x(i), y(r[key]))));
    g.stroke();
  }
  g.fillStyle = "#333";
  g.fillText(`r_j (blue), running estimate (red), delta = ${delta} (dashed)`, 44, 14);
}

function drawTarget() {
  const delta = Number($("delta").value);
  try {
    const s = JSON.parse(target_json(delta, Number($("tol").value), Number($("terms").value)));
    $("summary").textContent =
      `${s.kind}: final estimate ${s.estimate}, ${s.converged ? "within tol" : "not within tol"}` +
      (s.notes.length ? ` (${s.notes.join("; ")})` : "");
    $("summary").className = "";
    plot(s.rows, delta);
    $("trace").innerHTML =
      "<tr><th>j</th><th>k</th><th>p</th><th>q</th><th>r_j</th><th>estimate</th></tr>" +
      s.rows.map((r) => `<tr><td>${r.term}</td><td>${r.k}</td><td>${r.p}</td><td>${r.q}</td><td>${r.r}</td><td>${r.estimate}</td></tr>`).join("");
  } catch (e) {
    $("summary").textContent = String(e);
    $("summary").className = "err";
    $("trace").innerHTML = "";
    plot([], delta);
  }
}

await init();
for (const id of ["kind", "k", "left", "arms", "path"]) $(id).addEventListener("input", drawPattern);
for (const id of ["levels", "from", "to"]) $(id).addEventListener("input", drawArc);
for (const id of ["delta", "tol", "terms"]) $(id).addEventListener("input", drawTarget);
drawPattern();
drawArc();
drawTarget();
