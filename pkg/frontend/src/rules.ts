// All player-facing instructional copy in one place, so wording edits never
// touch game logic. The authoritative scoring text also arrives from the
// server with each session; this header copy frames the screen around it.

export const INTRO_TITLE = "Outwit the ranger";

export const INTRO_TEXT =
  "You are the poacher. Each site shows the chance a rhino is there this " +
  "round. The ranger sees the same chances and is trying to guess where " +
  "you will go. Pick a site every round; choices are simultaneous and " +
  "revealed together.";

export const SCORING_REMINDER =
  "+1 catch a rhino unseen / −1 get caught / 0 otherwise";

export const START_HINT =
  "Choose one of the standard rhino maps, or enter your own probabilities " +
  "(comma-separated, each between 0 and 1).";

export const FINISHED_TEXT =
  "Game over. Download your play log below, or start another run.";
