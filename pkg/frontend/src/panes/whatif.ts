// What-if explorer: collapsible move/counter-move tree plus the ranked
// recommendation split into EXECUTE NOW and AWAITING AUTHORIZATION.
//
// Displayed node values are byte-equal to the service response: the raw
// value literals are sliced out of the response body (they appear in
// document order, which for this payload is exactly the tree's pre-order)
// and attached to the parsed nodes. No value is ever recomputed here.

import { escapeHtml } from '../html.js';
import type { RecommendationView, WhatIfNode, WhatIfResponse } from '../types.js';

const VALUE_LITERAL = /"value":\s*([^,}\]\s]+)/g;

/** Attach each tree node's raw value literal from the response body. */
export function annotateRawValues(responseText: string, tree: WhatIfNode): void {
  const literals: string[] = [];
  for (const match of responseText.matchAll(VALUE_LITERAL)) {
    literals.push((match[1] as string).trim());
  }
  let index = 0;
  const walk = (node: WhatIfNode): void => {
    node.rawValue = literals[index];
    index += 1;
    for (const child of node.children) {
      walk(child);
    }
  };
  walk(tree);
  if (index !== literals.length) {
    throw new Error(`value literal count mismatch: ${index} nodes, ${literals.length} literals`);
  }
}

export function displayedValue(node: WhatIfNode): string {
  return node.rawValue ?? JSON.stringify(node.value);
}

function moveLabel(node: WhatIfNode): string {
  if (node.move === null) {
    return 'root';
  }
  if (node.move.play === null) {
    return 'pass';
  }
  return `${node.move.play} @ ${node.move.intensity}`;
}

export function renderTreeNode(node: WhatIfNode): string {
  const pruned = node.pruned_reason
    ? ` <span class="pruned-reason">${escapeHtml(node.pruned_reason)}</span>`
    : '';
  const label =
    `<span class="move-label" data-play="${escapeHtml(node.move?.play ?? '')}"` +
    ` data-intensity="${escapeHtml(node.move?.intensity ?? '')}">${escapeHtml(moveLabel(node))}</span>` +
    ` <span class="node-value" data-value="${escapeHtml(displayedValue(node))}">${escapeHtml(
      displayedValue(node),
    )}</span>${pruned}`;
  const cls = node.pruned_reason ? 'tree-node pruned' : 'tree-node';
  if (node.children.length === 0) {
    return `<li class="${cls}">${label}</li>`;
  }
  const children = node.children.map(renderTreeNode).join('');
  return `<li class="${cls}"><details><summary>${label}</summary><ul>${children}</ul></details></li>`;
}

export function renderRecommendation(rec: RecommendationView): string {
  const executable = rec.executable_now
    .map(
      (entry) =>
        `<li><button class="pick-move" data-play="${escapeHtml(entry.play)}"` +
        ` data-intensity="${escapeHtml(entry.intensity)}">` +
        `${escapeHtml(entry.play)} @ ${escapeHtml(entry.intensity)}</button>` +
        ` <span class="score">${entry.score.toFixed(3)}</span></li>`,
    )
    .join('');
  const awaiting = rec.awaiting
    .map(
      (entry) =>
        `<li>${escapeHtml(entry.play)} — needs ` +
        `<span class="needed">${escapeHtml(entry.needed_level)}</span></li>`,
    )
    .join('');
  return `
  <h3>EXECUTE NOW</h3>
  <ul id="execute-now">${executable || '<li class="empty">nothing executable</li>'}</ul>
  <h3>AWAITING AUTHORIZATION</h3>
  <ul id="rec-awaiting">${awaiting || '<li class="empty">none</li>'}</ul>`;
}

export function renderWhatIf(response: WhatIfResponse): string {
  return `
  ${renderRecommendation(response.recommendation)}
  <h3>Move/counter-move tree</h3>
  <ul class="whatif-tree">${renderTreeNode(response.tree)}</ul>`;
}

export function renderWhatIfPane(body: string, refusedReason?: string): string {
  const depthControl = refusedReason
    ? `<span class="refused" title="${escapeHtml(refusedReason)}">depth limit: ${escapeHtml(refusedReason)}</span>`
    : '';
  return `
<section class="pane" id="whatif-pane">
  <h2>What-if explorer</h2>
  <div class="whatif-controls">
    <label>depth <input id="whatif-depth" type="number" min="0" max="3" value="2" /></label>
    <label><input id="rule-dominated" type="checkbox" checked /> Dominated</label>
    <label><input id="rule-cycle" type="checkbox" checked /> CycleRepeat</label>
    <button id="run-whatif">explore</button>
    ${depthControl}
  </div>
  <div id="whatif-result">${body}</div>
</section>`;
}
