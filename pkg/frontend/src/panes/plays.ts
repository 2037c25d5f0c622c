// Play browser: full stratagem cards plus a move composer per play.
// Card rows keep the canonical field order.

import { escapeHtml } from '../html.js';
import type { PlayInfo, StratagemCard } from '../types.js';

const CARD_ROWS: [keyof StratagemCard, string][] = [
  ['stratagem', 'Stratagem'],
  ['description', 'Description'],
  ['tactical_implementations', 'Example Tactical Implementation'],
  ['infrastructure_properties', 'Infrastructure Properties Where Useful'],
  ['technological_requirements', 'Technological Requirement'],
  ['goals_satisfied', 'Goals Which May Be Satisfied'],
  ['adversary_properties', 'Adversary Properties Where Helpful'],
  ['effects_on_adversary', 'Effects on Adversary'],
  ['limitations_assumptions', 'Limitations and Assumptions'],
  ['implications', 'Implications'],
  ['example_red_use', 'Example Red Use'],
  ['example_blue_countermeasure', 'Example Blue Countermeasure'],
];

export function renderCard(card: StratagemCard): string {
  const rows = CARD_ROWS.map(([key, label]) => {
    const value = card[key];
    const text = Array.isArray(value) ? value.join(' • ') : value;
    return `<tr><th>${escapeHtml(label)}</th><td>${escapeHtml(text)}</td></tr>`;
  }).join('');
  return `<table class="card">${rows}</table>`;
}

export function renderComposer(play: PlayInfo, selected?: string): string {
  const options = play.intensity_choices
    .map(
      (choice) =>
        `<option value="${choice}"${choice === selected ? ' selected' : ''}>${choice}</option>`,
    )
    .join('');
  return (
    `<div class="composer" data-play="${escapeHtml(play.id)}">` +
    `<select class="intensity">${options}</select>` +
    `<button class="submit-move" data-play="${escapeHtml(play.id)}">submit move</button>` +
    `<span class="composer-status"></span></div>`
  );
}

export function renderPlay(play: PlayInfo, selectedIntensity?: string): string {
  const effects = play.effects
    .map((e) => `${e.kind}(${e.magnitude}, ${e.target})`)
    .join(', ');
  const cards = play.cards.map(renderCard).join('');
  return `
<details class="play" data-play="${escapeHtml(play.id)}">
  <summary><strong>${escapeHtml(play.name)}</strong>
    <span class="play-id">${escapeHtml(play.id)}</span>
    <span class="auth">${escapeHtml(play.required_authorization ?? '-')}</span></summary>
  <p class="meta">stratagems: ${play.stratagems.map((s) => `<code>${escapeHtml(s)}</code>`).join(' ')}
     · tags: ${play.tags.map(escapeHtml).join(', ') || 'none'}
     · ${play.duration_hours}h${play.jitter_hours ? ` ±${play.jitter_hours}h` : ''}</p>
  ${effects ? `<p class="effects">${escapeHtml(effects)}</p>` : ''}
  ${play.counters.length ? `<p class="counters">counters: ${play.counters.map(escapeHtml).join(', ')}</p>` : ''}
  ${cards}
  ${renderComposer(play, selectedIntensity)}
</details>`;
}

export function renderPlayBrowser(plays: PlayInfo[]): string {
  return `
<section class="pane" id="plays-pane">
  <h2>Play browser</h2>
  <div class="play-filter">
    <input id="play-tags" placeholder="tags, comma separated" value="standing" />
    <button id="load-plays">load</button>
  </div>
  <div id="play-list">${plays.map((p) => renderPlay(p)).join('')}</div>
</section>`;
}
