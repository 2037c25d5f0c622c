// Console state store. The timeline preserves server event order exactly;
// reconnect backfill overlap is dropped by sequence number, never reordered.

import type { MoveResponse, PendingAction, SessionEvent, SituationView } from './types.js';

export interface TrayEntry {
  actionId: number;
  play: string;
  intensity: string;
  neededLevel: string;
}

export class ConsoleStore {
  situation: SituationView | null = null;
  events: SessionEvent[] = [];
  lastSeq = -1;

  /** Optimistic tray entries from move responses not yet visible in the
   * situation payload; keyed by action id. */
  private optimisticTray = new Map<number, TrayEntry>();

  /** Append a batch in server order; returns how many were new. */
  appendEvents(batch: SessionEvent[]): number {
    let added = 0;
    for (const event of batch) {
      if (event.seq <= this.lastSeq) {
        continue; // overlap from reconnect backfill
      }
      this.events.push(event);
      this.lastSeq = event.seq;
      added += 1;
    }
    return added;
  }

  applySituation(view: SituationView): void {
    this.situation = view;
    for (const action of view.pending_actions) {
      this.optimisticTray.delete(action.action_id);
    }
  }

  applyMoveResponse(play: string, intensity: string, response: MoveResponse): void {
    if (response.status === 'pending' && response.action_id !== undefined) {
      this.optimisticTray.set(response.action_id, {
        actionId: response.action_id,
        play,
        intensity,
        neededLevel: response.needed_level ?? '?',
      });
    }
  }

  /** Moves awaiting authorization: situation truth plus optimistic entries. */
  awaitingTray(): TrayEntry[] {
    const entries: TrayEntry[] = [];
    const seen = new Set<number>();
    for (const action of this.situation?.pending_actions ?? []) {
      const needed = parsePendingLevel(action);
      if (needed !== null) {
        entries.push({
          actionId: action.action_id,
          play: action.play,
          intensity: action.intensity,
          neededLevel: needed,
        });
        seen.add(action.action_id);
      }
    }
    for (const entry of this.optimisticTray.values()) {
      if (!seen.has(entry.actionId)) {
        entries.push(entry);
      }
    }
    return entries.sort((a, b) => a.actionId - b.actionId);
  }

  /** Granted actions still running, for the pending-actions timeline. */
  activeActions(): PendingAction[] {
    return (this.situation?.pending_actions ?? []).filter(
      (a) => a.authorization === 'Granted' && a.outcome === 'Pending',
    );
  }
}

function parsePendingLevel(action: PendingAction): string | null {
  const prefix = 'Pending:';
  if (action.authorization.startsWith(prefix)) {
    return action.authorization.slice(prefix.length);
  }
  return null;
}
