import init, { solveGame, composeGames, generateGame } from "./pkg/bimatrix_wasm_demo.js";

const $ = (id) => document.getElementById(id);

function showError(e) {
  $("error").textContent = e ? String(e) : "";
}

// Big matrices are truncated; the equilibrium vectors are still complete.
const MAX_SHOWN = 24;

function matrixTable(m, x, y) {
  const table = document.createElement("table");
  const rows = Math.min(m.length, MAX_SHOWN);
  const cols = Math.min(m[0].length, MAX_SHOWN);
  const head = table.insertRow();
  head.appendChild(document.createElement("th")).textContent = "x \\ y";
  for (let j = 0; j < cols; j++) {
    head.appendChild(document.createElement("th")).textContent = y[j];
  }
  for (let i = 0; i < rows; i++) {
    const tr = table.insertRow();
    tr.appendChild(document.createElement("th")).textContent = x[i];
    for (let j = 0; j < cols; j++) {
      const td = tr.insertCell();
      td.textContent = m[i][j];
      const inX = x[i] !== "0", inY = y[j] !== "0";
      if (inX && inY) td.className = "both";
      else if (inX || inY) td.className = "support";
    }
  }
  return table;
}

function treeList(node) {
  const li = document.createElement("li");
  const label = document.createElement("span");
  label.className = "kind";
  label.textContent = node.kind;
  li.appendChild(label);
  let text = ` ${node.rows}x${node.cols}`;
  if (node.kind === "sum") text += ` K=${node.k}`;
  if (node.kind === "reduced") text += ` -> ${node.kept_rows}x${node.kept_cols}`;
  li.appendChild(document.createTextNode(text));
  if (node.children.length) {
    const ul = document.createElement("ul");
    node.children.forEach((c) => ul.appendChild(treeList(c)));
    li.appendChild(ul);
  }
  return li;
}

function solve() {
  showError();
  let r;
  try {
    r = JSON.parse(solveGame($("game").value));
  } catch (e) {
    $("result").hidden = true;
    return showError(e);
  }
  $("stats").textContent =
    `x = (${r.x.join(", ")})  y = (${r.y.join(", ")})  ` +
    `verified: ${r.verified}  lambda: ${r.lambda}  leaves: ${r.leaves}  ${r.elapsed_ms.toFixed(2)} ms`;
  $("a").replaceChildren(matrixTable(r.a, r.x, r.y));
  $("b").replaceChildren(matrixTable(r.b, r.x, r.y));
  const ul = document.createElement("ul");
  ul.appendChild(treeList(r.tree));
  $("tree").replaceChildren(ul);
  $("result").hidden = false;
}

function compose(op) {
  showError();
  try {
    $("game").value = composeGames(op, $("first").value, $("second").value, $("k").value);
    solve();
  } catch (e) {
    showError(e);
  }
}

function generate() {
  showError();
  try {
    $("game").value = generateGame(+$("seed").value, +$("min").value, +$("max").value);
    solve();
  } catch (e) {
    showError(e);
  }
}

await init();
$("solve").onclick = solve;
$("sum").onclick = () => compose("sum");
$("product").onclick = () => compose("product");
$("generate").onclick = generate;
solve();
