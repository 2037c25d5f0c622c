// Console boot and DOM wiring. The operator loop: observe the board,
// browse plays, explore what-ifs, act; the what-if answer pre-fills the
// move composer.

import { ApiClient, ApiError } from './api.js';
import { ConsoleStore } from './state.js';
import { renderSituation } from './panes/situation.js';
import { renderPlayBrowser, renderPlay } from './panes/plays.js';
import { renderTimeline, renderTimelineEntry } from './panes/timeline.js';
import { renderWhatIf, renderWhatIfPane } from './panes/whatif.js';
import type { PlayInfo } from './types.js';

const api = new ApiClient('');
const store = new ConsoleStore();
let session = '';
let plays: PlayInfo[] = [];
let eventSource: EventSource | null = null;

function pane(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing pane container ${id}`);
  }
  return el;
}

function showBanner(message: string): void {
  const banner = pane('banner');
  banner.textContent = message;
  banner.classList.toggle('hidden', message === '');
}

async function refreshSituation(): Promise<void> {
  try {
    const view = await api.situation(session);
    store.applySituation(view);
    pane('situation-root').innerHTML = renderSituation(
      view,
      store.awaitingTray(),
      store.activeActions(),
    );
    showBanner('');
  } catch (err) {
    showBanner(err instanceof ApiError ? `service error: ${err.message}` : String(err));
  }
}

async function loadPlays(tags: string): Promise<void> {
  plays = await api.plays(session, tags, '');
  pane('plays-root').innerHTML = renderPlayBrowser(plays);
}

function appendTimeline(count: number): void {
  const list = document.getElementById('timeline');
  if (!list) {
    pane('timeline-root').innerHTML = renderTimeline(store.events);
    return;
  }
  const fresh = store.events.slice(store.events.length - count);
  for (const event of fresh) {
    list.insertAdjacentHTML('beforeend', renderTimelineEntry(event));
  }
}

function connectStream(): void {
  // Reconnect with backfill from the last seen sequence number.
  eventSource?.close();
  eventSource = new EventSource(api.eventStreamUrl(session, store.lastSeq));
  eventSource.onmessage = (message) => {
    const added = store.appendEvents([JSON.parse(message.data)]);
    if (added > 0) {
      appendTimeline(added);
    }
  };
  eventSource.onerror = () => {
    eventSource?.close();
    setTimeout(connectStream, 1000);
  };
}

async function runWhatIf(): Promise<void> {
  const depth = Number((document.getElementById('whatif-depth') as HTMLInputElement).value);
  const rules: string[] = [];
  if ((document.getElementById('rule-dominated') as HTMLInputElement).checked) {
    rules.push('Dominated');
  }
  if ((document.getElementById('rule-cycle') as HTMLInputElement).checked) {
    rules.push('CycleRepeat');
  }
  try {
    const response = await api.whatif(session, depth, rules);
    pane('whatif-result').innerHTML = renderWhatIf(response);
  } catch (err) {
    if (err instanceof ApiError) {
      pane('whatif-root').innerHTML = renderWhatIfPane('', err.message);
      wireWhatIfControls();
    }
  }
}

function prefillComposer(play: string, intensity: string): void {
  const details = document.querySelector(`details.play[data-play="${play}"]`);
  if (!(details instanceof HTMLDetailsElement)) {
    return;
  }
  details.open = true;
  const select = details.querySelector('select.intensity');
  if (select instanceof HTMLSelectElement && intensity) {
    select.value = intensity;
  }
  details.scrollIntoView({ behavior: 'smooth', block: 'center' });
}

async function submitMove(play: string, button: HTMLElement): Promise<void> {
  const composer = button.closest('.composer');
  const select = composer?.querySelector('select.intensity');
  const status = composer?.querySelector('.composer-status');
  const intensity = select instanceof HTMLSelectElement ? select.value : 'Medium';
  const response = await api.submitMove(session, play, intensity);
  store.applyMoveResponse(play, intensity, response);
  if (status) {
    status.textContent =
      response.status === 'rejected'
        ? `rejected: ${response.reason}`
        : response.status === 'pending'
          ? `pending — needs ${response.needed_level}`
          : `accepted, completes t${response.completion}`;
  }
  await refreshSituation();
}

function wireWhatIfControls(): void {
  document.getElementById('run-whatif')?.addEventListener('click', () => void runWhatIf());
}

async function advance(ticks: number): Promise<void> {
  await api.advance(session, ticks);
  await refreshSituation();
}

function wireGlobalHandlers(): void {
  document.body.addEventListener('click', (event) => {
    const target = event.target;
    if (!(target instanceof HTMLElement)) {
      return;
    }
    if (target.classList.contains('submit-move')) {
      void submitMove(target.dataset['play'] ?? '', target);
    } else if (target.classList.contains('pick-move')) {
      prefillComposer(target.dataset['play'] ?? '', target.dataset['intensity'] ?? '');
    } else if (target.classList.contains('authorize')) {
      const actionId = Number(target.dataset['action']);
      const level = target.dataset['level'] ?? 'National';
      void api
        .authorize(session, actionId, level)
        .then(() => refreshSituation())
        .catch((err) => showBanner(`authorize failed: ${err.message}`));
    } else if (target.id === 'load-plays') {
      const input = document.getElementById('play-tags') as HTMLInputElement;
      void loadPlays(input.value);
    } else if (target.dataset['advance']) {
      void advance(Number(target.dataset['advance']));
    }
  });
}

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const existing = params.get('session');
  if (existing) {
    session = existing;
  } else {
    const created = await api.createSession({
      seed: Number(params.get('seed') ?? 42),
      auth: params.get('auth') ?? 'Operator',
    });
    session = created.session;
    params.set('session', session);
    history.replaceState(null, '', `?${params.toString()}`);
  }
  pane('whatif-root').innerHTML = renderWhatIfPane('');
  pane('timeline-root').innerHTML = renderTimeline(store.events);
  wireWhatIfControls();
  wireGlobalHandlers();
  await refreshSituation();
  await loadPlays('standing');
  connectStream();
}

void boot();
