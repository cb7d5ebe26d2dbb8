// Wire types shared with the vote-collection service.
export function rightItem(t) {
    return t.left_item === t.pair[0] ? t.pair[1] : t.pair[0];
}
export function chosenItem(t, side) {
    return side === "left" ? t.left_item : rightItem(t);
}
