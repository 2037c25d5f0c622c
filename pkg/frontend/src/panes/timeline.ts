// Event timeline: renders the store's event list verbatim, in the exact
// order the server streamed it.

import { escapeHtml } from '../html.js';
import type { SessionEvent } from '../types.js';

function summary(event: SessionEvent): string {
  const p = event.payload;
  switch (event.kind) {
    case 'ObservationDelivered':
      return `${p['channel']} ${p['signal']} (${p['magnitude']})`;
    case 'ActionScheduled':
      return `${p['play']} @ ${p['intensity']} — ${p['authorization']}`;
    case 'ActionCompleted':
      return `${p['play']} — ${p['outcome']}`;
    case 'ActionRejected':
      return `${p['play']} rejected: ${p['reason']}`;
    case 'PostureChanged':
      return `posture ${p['from']} → ${p['to']}`;
    case 'PhaseSpawned':
      return `${p['phase']} (from ${p['source']})`;
    case 'MissionSlipped':
      return `task ${p['task']} +${p['pause_hours']}h (total ${p['total_delay_hours']}h)`;
    case 'AuthorizationGranted':
      return `${p['play']} granted at ${p['level']}`;
    default:
      return JSON.stringify(p);
  }
}

export function renderTimelineEntry(event: SessionEvent): string {
  return (
    `<li class="event kind-${escapeHtml(event.kind)}" data-seq="${event.seq}">` +
    `<span class="tick">t${event.tick}</span> ` +
    `<span class="kind">${escapeHtml(event.kind)}</span> ` +
    `<span class="summary">${escapeHtml(summary(event))}</span></li>`
  );
}

export function renderTimeline(events: SessionEvent[]): string {
  const entries = events.map(renderTimelineEntry).join('');
  return `
<section class="pane" id="timeline-pane">
  <h2>Timeline</h2>
  <ul id="timeline">${entries || '<li class="empty">no events yet</li>'}</ul>
</section>`;
}
